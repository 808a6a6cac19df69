#include "attnet/stitch.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "csv.hpp"

namespace attnet {

std::vector<Series> stitch_windows(const TrendsWindow& first, const TrendsWindow& second, const StitchConfig& cfg) {
    if (cfg.smoothing_add < 1) throw Error(Errc::InvalidArgument, "smoothing_add must be >= 1");
    if (!(cfg.scale_top > 0)) throw Error(Errc::InvalidArgument, "scale_top must be > 0");
    if (first.source != second.source) throw Error(Errc::InvalidArgument, "windows belong to different sources");
    if (first.end_date != second.start_date) {
        throw Error(Errc::NoOverlap, first.source.str() + ": " + format_date(first.end_date) +
                                         " != " + format_date(second.start_date));
    }
    const auto ref1 = first.values.find(cfg.reference_target);
    const auto ref2 = second.values.find(cfg.reference_target);
    if (ref1 == first.values.end() || ref2 == second.values.end()) {
        throw Error(Errc::MissingReference, first.source.str() + " lacks " + cfg.reference_target.str());
    }

    const double add = cfg.smoothing_add;
    const std::size_t len1 = static_cast<std::size_t>(first.length());
    const std::size_t len2 = static_cast<std::size_t>(second.length());
    // Scaled as top * (v + add) / ref so the reference overlap day is exactly top.
    const double ref_a = ref1->second[len1 - 1] + add;
    const double ref_b = ref2->second[0] + add;
    const double top = cfg.scale_top;

    std::set<CountryCode> targets;
    for (const auto& [t, v] : first.values) targets.insert(t);
    for (const auto& [t, v] : second.values) targets.insert(t);

    std::vector<Series> out;
    out.reserve(targets.size());
    for (const auto& target : targets) {
        const auto a = first.values.find(target);
        const auto b = second.values.find(target);
        const bool in_a = a != first.values.end();
        const bool in_b = b != second.values.end();
        if ((!in_a || !in_b) && cfg.strict_targets) {
            throw Error(Errc::TargetSetMismatch, first.source.str() + "->" + target.str() + " in one window only");
        }
        Series s;
        s.source = first.source;
        s.target = target;
        s.start_date = first.start_date;
        s.values.assign(len1 + len2 - 1, 0.0);
        s.gap = !(in_a && in_b);
        if (in_a) {
            for (std::size_t i = 0; i + 1 < len1; ++i) s.values[i] = top * (a->second[i] + add) / ref_a;
        }
        if (in_b) {
            for (std::size_t i = 0; i < len2; ++i) s.values[len1 - 1 + i] = top * (b->second[i] + add) / ref_b;
        }
        if (!s.gap) {
            s.seam_discrepancy = std::abs(top * (a->second[len1 - 1] + add) / ref_a - top * (b->second[0] + add) / ref_b);
        }
        out.push_back(std::move(s));
    }
    return out;
}

StitchScales stitch_scales(const TrendsWindow& first, const TrendsWindow& second, const StitchConfig& cfg) {
    const auto ref1 = first.values.find(cfg.reference_target);
    const auto ref2 = second.values.find(cfg.reference_target);
    if (ref1 == first.values.end() || ref2 == second.values.end()) {
        throw Error(Errc::MissingReference, first.source.str() + " lacks " + cfg.reference_target.str());
    }
    if (first.end_date != second.start_date) throw Error(Errc::NoOverlap, first.source.str());
    return {cfg.scale_top / (ref1->second.back() + cfg.smoothing_add),
            cfg.scale_top / (ref2->second.front() + cfg.smoothing_add)};
}

std::vector<Series> stitch_all(const std::vector<TrendsWindow>& windows, const StitchConfig& cfg) {
    std::map<CountryCode, std::vector<const TrendsWindow*>> by_source;
    for (const auto& w : windows) by_source[w.source].push_back(&w);
    std::vector<Series> out;
    for (auto& [source, list] : by_source) {
        if (list.size() != 2) {
            throw Error(Errc::NoOverlap, source.str() + " has " + std::to_string(list.size()) + " windows, expected 2");
        }
        if (list[1]->start_date < list[0]->start_date) std::swap(list[0], list[1]);
        auto part = stitch_windows(*list[0], *list[1], cfg);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

std::vector<double> difference(const std::vector<double>& values, int order) {
    if (order < 0 || order > 2) throw Error(Errc::InvalidArgument, "differencing order must be 0, 1 or 2");
    if (values.size() <= static_cast<std::size_t>(order)) {
        throw Error(Errc::TooShort, "series of length " + std::to_string(values.size()) + " cannot be differenced " +
                                        std::to_string(order) + " times");
    }
    std::vector<double> out = values;
    for (int k = 0; k < order; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

Series make_stationary(const Series& s, int order) {
    Series out = s;
    out.values = difference(s.values, order);
    out.start_date = s.start_date + std::chrono::days(order);
    return out;
}

void write_series_csv(std::ostream& out, const std::vector<Series>& series) {
    out << "source,target,date,value\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << s.source.str() << ',' << s.target.str() << ','
                << format_date(s.start_date + std::chrono::days(static_cast<int>(i))) << ','
                << csv::fmt_real(s.values[i]) << '\n';
        }
    }
}

}  // namespace attnet
