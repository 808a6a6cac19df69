#include "attnet/causality.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "attnet/stats.hpp"
#include "attnet/stitch.hpp"
#include "csv.hpp"

namespace attnet {

std::string_view pair_class_name(PairClass c) noexcept {
    switch (c) {
        case PairClass::MediaCausesPublic: return "MediaCausesPublic";
        case PairClass::PublicCausesMedia: return "PublicCausesMedia";
        case PairClass::Both: return "Both";
        case PairClass::Neither: return "Neither";
    }
    return "?";
}

namespace {

bool constant(std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
}

double residual_ss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) throw Error(Errc::SingularDesign, "collinear regressors");
    const Eigen::VectorXd beta = qr.solve(y);
    return (y - X * beta).squaredNorm();
}

}  // namespace

bool lag_feasible(std::size_t length, int lag) {
    return lag >= 1 && static_cast<long>(length) - 3L * lag - 1 >= 5;
}

GrangerTest granger_test(std::span<const double> x, std::span<const double> y, int lag) {
    if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "granger inputs differ in length");
    if (lag < 1) throw Error(Errc::InvalidArgument, "lag must be >= 1");
    if (!lag_feasible(y.size(), lag)) {
        throw Error(Errc::InsufficientLength, "T=" + std::to_string(y.size()) + " too short for lag " +
                                                  std::to_string(lag));
    }
    if (constant(x) || constant(y)) throw Error(Errc::DegenerateSeries, "constant series");

    const int T = static_cast<int>(y.size());
    const int rows = T - lag;
    Eigen::MatrixXd Xu(rows, 2 * lag + 1);
    Eigen::VectorXd target(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = r + lag;
        target(r) = y[t];
        Xu(r, 0) = 1.0;
        for (int k = 1; k <= lag; ++k) {
            Xu(r, k) = y[t - k];
            Xu(r, lag + k) = x[t - k];
        }
    }
    GrangerTest out;
    out.lag = lag;
    out.df_num = lag;
    out.df_den = T - 3 * lag - 1;
    out.rss_restricted = residual_ss(Xu.leftCols(lag + 1), target);
    out.rss_unrestricted = residual_ss(Xu, target);
    const double gain = std::max(0.0, out.rss_restricted - out.rss_unrestricted);
    if (out.rss_unrestricted <= 0.0) {
        out.F = gain > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
        out.F = (gain / lag) / (out.rss_unrestricted / out.df_den);
    }
    out.p = stats::f_sf(out.F, out.df_num, out.df_den);
    return out;
}

GrangerResult best_lag_scan(std::span<const double> x, std::span<const double> y, GrangerDirection direction,
                            const LagScanOptions& opts) {
    GrangerResult res;
    res.direction = direction;
    std::optional<GrangerTest> best_any, best_sig;
    for (int lag = opts.min_lag; lag <= opts.max_lag; ++lag) {
        if (!lag_feasible(y.size(), lag)) continue;
        const auto t = granger_test(x, y, lag);
        if (!best_any || t.F > best_any->F) best_any = t;
        if (t.p < opts.alpha && (!best_sig || t.F > best_sig->F)) best_sig = t;
    }
    if (!best_any) throw Error(Errc::AllLagsInfeasible, "no feasible lag for T=" + std::to_string(y.size()));
    if (best_sig) {
        res.best_lag = best_sig->lag;
        res.F = best_sig->F;
        res.p = best_sig->p;
        res.significant = true;
    } else {
        res.F = best_any->F;
        res.p = best_any->p;
    }
    return res;
}

PairClass classify_pair(const GrangerResult& m2p, const GrangerResult& p2m) {
    if (m2p.direction != GrangerDirection::MediaToPublic || p2m.direction != GrangerDirection::PublicToMedia) {
        throw Error(Errc::DirectionMismatch, "expected (media->public, public->media) results");
    }
    if (m2p.significant && p2m.significant) return PairClass::Both;
    if (m2p.significant) return PairClass::MediaCausesPublic;
    if (p2m.significant) return PairClass::PublicCausesMedia;
    return PairClass::Neither;
}

std::map<EdgeKey, PairOutcome> granger_matrix(const std::map<EdgeKey, PairSeries>& pairs,
                                              const GrangerMatrixOptions& opts) {
    std::vector<const std::pair<const EdgeKey, PairSeries>*> items;
    for (const auto& kv : pairs) items.push_back(&kv);
    std::vector<PairOutcome> outcomes(items.size());

    auto run_one = [&](std::size_t i) {
        const auto& ps = items[i]->second;
        PairOutcome& o = outcomes[i];
        try {
            if (ps.media.size() != ps.public_.size()) throw Error(Errc::LengthMismatch, "media/public lengths differ");
            const auto media = difference(ps.media, opts.difference_order);
            const auto pub = difference(ps.public_, opts.difference_order);
            o.m2p = best_lag_scan(media, pub, GrangerDirection::MediaToPublic, opts.scan);
            o.p2m = best_lag_scan(pub, media, GrangerDirection::PublicToMedia, opts.scan);
            o.cls = classify_pair(o.m2p, o.p2m);
        } catch (const Error& e) {
            o.cls.reset();
            o.error = e.what();
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(opts.workers > 0 ? opts.workers : std::thread::hardware_concurrency(),
                                                        1, std::max<std::size_t>(1, items.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) run_one(i);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < items.size(); i += workers) run_one(i);
            });
        }
    }

    std::map<EdgeKey, PairOutcome> out;
    for (std::size_t i = 0; i < items.size(); ++i) out.emplace(items[i]->first, std::move(outcomes[i]));
    return out;
}

namespace {

std::string lag_field(const GrangerResult& r) { return r.best_lag ? std::to_string(*r.best_lag) : ""; }

}  // namespace

void write_granger_csv(std::ostream& out, const std::map<EdgeKey, PairOutcome>& results) {
    out << "source,target,class,m2p_lag,m2p_F,m2p_p,p2m_lag,p2m_F,p2m_p\n";
    for (const auto& [key, o] : results) {
        out << key.first.str() << ',' << key.second.str() << ',';
        if (!o.cls) {
            out << "error,,,,,,\n";
            continue;
        }
        out << pair_class_name(*o.cls) << ',' << lag_field(o.m2p) << ',' << csv::fmt_real(o.m2p.F) << ','
            << csv::fmt_real(o.m2p.p) << ',' << lag_field(o.p2m) << ',' << csv::fmt_real(o.p2m.F) << ','
            << csv::fmt_real(o.p2m.p) << '\n';
    }
}

void write_feature_table(std::ostream& out, const std::map<EdgeKey, PairOutcome>& results,
                         const std::map<EdgeKey, PairSeries>& pairs, const AttentionNetwork& media,
                         const AttentionNetwork& public_, const RegionMap* regions) {
    auto degree = [](const AttentionNetwork& n, CountryCode c, bool outgoing) {
        std::size_t d = 0;
        for (const auto& [key, w] : n.edges) d += (outgoing ? key.first : key.second) == c;
        return d;
    };
    auto weight = [](const AttentionNetwork& n, const EdgeKey& k) {
        auto it = n.edges.find(k);
        return it == n.edges.end() ? 0.0 : it->second;
    };
    auto moments = [](const std::vector<double>& v) {
        if (v.empty()) return std::pair{0.0, 0.0};
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::pair{m, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
    };

    out << "source,target,class,media_out_degree_source,media_in_degree_target,public_out_degree_source,"
           "public_in_degree_target,media_weight,public_weight,media_mean,media_sd,public_mean,public_sd,same_region\n";
    for (const auto& [key, o] : results) {
        const auto& ps = pairs.at(key);
        const auto [mm, ms] = moments(ps.media);
        const auto [pm, psd] = moments(ps.public_);
        std::string same;
        if (regions) {
            auto a = regions->find(key.first), b = regions->find(key.second);
            if (a != regions->end() && b != regions->end()) same = a->second == b->second ? "1" : "0";
        }
        out << key.first.str() << ',' << key.second.str() << ',' << (o.cls ? pair_class_name(*o.cls) : "error") << ','
            << degree(media, key.first, true) << ',' << degree(media, key.second, false) << ','
            << degree(public_, key.first, true) << ',' << degree(public_, key.second, false) << ','
            << csv::fmt_real(weight(media, key)) << ',' << csv::fmt_real(weight(public_, key)) << ','
            << csv::fmt_real(mm) << ',' << csv::fmt_real(ms) << ',' << csv::fmt_real(pm) << ',' << csv::fmt_real(psd)
            << ',' << same << '\n';
    }
}

}  // namespace attnet
