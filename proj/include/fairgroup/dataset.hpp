#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fairgroup {

enum class FeatureRole { Unprotected, Protected, Target };
enum class FeatureKind { Numeric, Binary };

struct FeatureSpec {
    std::string name;
    FeatureRole role = FeatureRole::Unprotected;
    FeatureKind kind = FeatureKind::Numeric;

    bool operator==(const FeatureSpec&) const = default;
};

// Column-oriented tabular data. Immutable after construction; the
// constructor enforces equal column lengths, 0/1 content for binary
// columns, exactly one binary target, and at most one protected feature
// (binary when present). Row order is significant: it defines the point
// indices used throughout the pipeline.
class Dataset {
public:
    Dataset(std::vector<FeatureSpec> specs, std::vector<std::vector<double>> columns);

    std::size_t n() const { return n_; }
    std::size_t num_features() const { return specs_.size(); }

    const std::vector<FeatureSpec>& specs() const { return specs_; }
    const FeatureSpec& spec(std::size_t i) const { return specs_[i]; }
    const std::vector<double>& column(std::size_t i) const { return columns_[i]; }
    const std::vector<double>& column(const std::string& name) const;

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t target_index() const { return target_index_; }
    std::optional<std::size_t> protected_index() const;
    std::vector<std::size_t> unprotected_indices() const;

    // Target column as 0/1 labels.
    std::vector<int> labels() const;
    // Protected column as 0/1 flags; requires a protected feature.
    std::vector<std::uint8_t> protected_flags() const;

    // Row subset in the given order.
    Dataset subset(const std::vector<std::size_t>& rows) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<FeatureSpec> specs_;
    std::vector<std::vector<double>> columns_;
    std::size_t n_ = 0;
    std::size_t target_index_ = 0;
};

// Strict CSV ingest: UTF-8, comma-separated, one header row whose names
// must be exactly the spec names (any order; columns are returned in spec
// order), every cell a plain number, no missing values.
Dataset load_csv(const std::string& path, const std::vector<FeatureSpec>& specs);

// Inverse of load_csv for the same dialect; numbers are written in
// shortest round-trip form so load(save(d)) == d.
void save_csv(const Dataset& d, const std::string& path);
std::string to_csv(const Dataset& d);

// Replace a numeric feature by the indicator [value < threshold] and mark
// it protected. Values exactly at the threshold come out unprotected.
Dataset binarize_protected(const Dataset& d, const std::string& feature, double threshold);

// Mark an existing 0/1 feature as protected without thresholding.
Dataset mark_protected(const Dataset& d, const std::string& feature);

}  // namespace fairgroup
