#pragma once

#include <iosfwd>
#include <vector>

#include "attnet/core.hpp"
#include "attnet/ingest.hpp"

namespace attnet {

/// Continuous daily series for one (source, target) pair.
struct Series {
    CountryCode source;
    CountryCode target;
    Date start_date;
    std::vector<double> values;
    /// Set when the target was missing from one of the stitched windows; the
    /// uncovered days hold 0.
    bool gap = false;
    /// |s1*(w1[overlap]+add) - s2*(w2[overlap]+add)|, 0 for gap series.
    double seam_discrepancy = 0.0;

    Period period() const { return {start_date, start_date + std::chrono::days(static_cast<int>(values.size()) - 1)}; }
};

struct StitchConfig {
    CountryCode reference_target{"US"};
    int smoothing_add = 1;
    double scale_top = 100.0;
    /// When true a target present in only one window raises TargetSetMismatch
    /// instead of producing a gap-flagged series.
    bool strict_targets = false;
};

/// Joins two windows of one source that share exactly one day.
///
/// Each window is put on a common scale by mapping the reference target's
/// overlap-day volume (plus `smoothing_add`) to `scale_top`. Days before the
/// overlap come from `first`, the overlap day and after from `second`.
std::vector<Series> stitch_windows(const TrendsWindow& first, const TrendsWindow& second, const StitchConfig& cfg = {});

struct StitchScales {
    double first;
    double second;
};

/// Multipliers applied to (value + add) in each window.
StitchScales stitch_scales(const TrendsWindow& first, const TrendsWindow& second, const StitchConfig& cfg = {});

/// Groups windows by source and stitches each consecutive pair. A source must
/// have exactly two windows.
std::vector<Series> stitch_all(const std::vector<TrendsWindow>& windows, const StitchConfig& cfg = {});

/// Applies `order`-fold first differencing (order in {0,1,2}).
Series make_stationary(const Series& s, int order);
std::vector<double> difference(const std::vector<double>& values, int order);

void write_series_csv(std::ostream& out, const std::vector<Series>& series);

}  // namespace attnet
