#include "fairgroup/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <unordered_map>

#include "fairgroup/errors.hpp"
#include "fairgroup/textio.hpp"

namespace fairgroup {

namespace {

bool is_binary_value(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

Dataset::Dataset(std::vector<FeatureSpec> specs, std::vector<std::vector<double>> columns)
    : specs_(std::move(specs)), columns_(std::move(columns)) {
    if (specs_.empty()) throw Error("dataset needs at least one feature");
    if (specs_.size() != columns_.size()) {
        throw LengthMismatch("spec count != column count");
    }
    n_ = columns_.front().size();
    if (n_ < 1) throw Error("dataset needs at least one row");

    std::size_t target_count = 0;
    std::size_t protected_count = 0;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        const FeatureSpec& s = specs_[i];
        if (columns_[i].size() != n_) {
            throw LengthMismatch("column '" + s.name + "' has mismatched length");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            if (!std::isfinite(columns_[i][j])) {
                throw ParseError(j, s.name, "non-finite value");
            }
            if (s.kind == FeatureKind::Binary && !is_binary_value(columns_[i][j])) {
                throw NonBinaryValue(s.name, j);
            }
        }
        if (s.role == FeatureRole::Target) {
            ++target_count;
            target_index_ = i;
            if (s.kind != FeatureKind::Binary) {
                throw Error("target feature '" + s.name + "' must be binary");
            }
        }
        if (s.role == FeatureRole::Protected) {
            ++protected_count;
            if (s.kind != FeatureKind::Binary) {
                throw Error("protected feature '" + s.name + "' must be binary");
            }
        }
    }
    if (target_count != 1) throw Error("dataset must have exactly one target feature");
    if (protected_count > 1) throw Error("dataset must have at most one protected feature");
}

const std::vector<double>& Dataset::column(const std::string& name) const {
    auto idx = find(name);
    if (!idx) throw UnknownFeature(name);
    return columns_[*idx];
}

std::optional<std::size_t> Dataset::find(const std::string& name) const {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> Dataset::protected_index() const {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].role == FeatureRole::Protected) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> Dataset::unprotected_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].role == FeatureRole::Unprotected) out.push_back(i);
    }
    return out;
}

std::vector<int> Dataset::labels() const {
    const auto& col = columns_[target_index_];
    std::vector<int> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = col[j] == 1.0 ? 1 : 0;
    return out;
}

std::vector<std::uint8_t> Dataset::protected_flags() const {
    auto idx = protected_index();
    if (!idx) throw Error("dataset has no protected feature");
    const auto& col = columns_[*idx];
    std::vector<std::uint8_t> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = col[j] == 1.0 ? 1 : 0;
    return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    std::vector<std::vector<double>> cols(columns_.size());
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        cols[i].reserve(rows.size());
        for (std::size_t r : rows) cols[i].push_back(columns_[i].at(r));
    }
    return Dataset(specs_, std::move(cols));
}

Dataset load_csv(const std::string& path, const std::vector<FeatureSpec>& specs) {
    if (!std::filesystem::exists(path)) throw IoError("no such file: " + path);
    const std::string text = read_file(path);
    if (trim(text).empty()) throw EmptyFile(path);

    auto lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw EmptyFile(path);

    // Header: must mention every spec name exactly once and nothing else.
    auto header = split(lines[0], ',');
    std::unordered_map<std::string, std::size_t> header_pos;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name(trim(header[i]));
        if (!header_pos.emplace(name, i).second) {
            throw UnexpectedColumn(name);
        }
    }
    std::vector<std::size_t> col_of_spec(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        auto it = header_pos.find(specs[s].name);
        if (it == header_pos.end()) throw MissingColumn(specs[s].name);
        col_of_spec[s] = it->second;
        header_pos.erase(it);
    }
    if (!header_pos.empty()) throw UnexpectedColumn(header_pos.begin()->first);

    const std::size_t rows = lines.size() - 1;
    if (rows == 0) throw EmptyFile(path);

    std::vector<std::vector<double>> columns(specs.size());
    for (auto& c : columns) c.reserve(rows);

    for (std::size_t r = 0; r < rows; ++r) {
        auto cells = split(lines[r + 1], ',');
        if (cells.size() != header.size()) {
            throw ParseError(r, "", "expected " + std::to_string(header.size()) +
                                        " cells, got " + std::to_string(cells.size()));
        }
        for (std::size_t s = 0; s < specs.size(); ++s) {
            const std::string_view cell = trim(cells[col_of_spec[s]]);
            if (cell.empty()) throw ParseError(r, specs[s].name, "missing value");
            auto value = parse_double(cell);
            if (!value) throw ParseError(r, specs[s].name, "not a number: '" + std::string(cell) + "'");
            if (specs[s].kind == FeatureKind::Binary && !(*value == 0.0 || *value == 1.0)) {
                throw NonBinaryValue(specs[s].name, r);
            }
            columns[s].push_back(*value);
        }
    }
    return Dataset(specs, std::move(columns));
}

std::string to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t i = 0; i < d.num_features(); ++i) {
        if (i) out += ',';
        out += d.spec(i).name;
    }
    out += '\n';
    for (std::size_t j = 0; j < d.n(); ++j) {
        for (std::size_t i = 0; i < d.num_features(); ++i) {
            if (i) out += ',';
            out += fmt_double(d.column(i)[j]);
        }
        out += '\n';
    }
    return out;
}

void save_csv(const Dataset& d, const std::string& path) {
    write_file(path, to_csv(d));
}

Dataset binarize_protected(const Dataset& d, const std::string& feature, double threshold) {
    auto idx = d.find(feature);
    if (!idx) throw UnknownFeature(feature);
    if (d.spec(*idx).kind != FeatureKind::Numeric) throw AlreadyBinary(feature);

    std::vector<FeatureSpec> specs = d.specs();
    specs[*idx].kind = FeatureKind::Binary;
    specs[*idx].role = FeatureRole::Protected;

    std::vector<std::vector<double>> columns;
    columns.reserve(d.num_features());
    for (std::size_t i = 0; i < d.num_features(); ++i) columns.push_back(d.column(i));
    for (double& v : columns[*idx]) v = v < threshold ? 1.0 : 0.0;
    return Dataset(std::move(specs), std::move(columns));
}

Dataset mark_protected(const Dataset& d, const std::string& feature) {
    auto idx = d.find(feature);
    if (!idx) throw UnknownFeature(feature);
    const auto& col = d.column(*idx);
    for (std::size_t j = 0; j < col.size(); ++j) {
        if (!(col[j] == 0.0 || col[j] == 1.0)) throw NonBinaryValue(feature, j);
    }
    std::vector<FeatureSpec> specs = d.specs();
    if (specs[*idx].role == FeatureRole::Target) {
        throw Error("target feature cannot be protected");
    }
    specs[*idx].kind = FeatureKind::Binary;
    specs[*idx].role = FeatureRole::Protected;
    std::vector<std::vector<double>> columns;
    columns.reserve(d.num_features());
    for (std::size_t i = 0; i < d.num_features(); ++i) columns.push_back(d.column(i));
    return Dataset(std::move(specs), std::move(columns));
}

}  // namespace fairgroup
