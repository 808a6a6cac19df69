#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "attnet/causality.hpp"
#include "attnet/motifs.hpp"
#include "attnet/network.hpp"
#include "attnet/pipeline.hpp"
#include "attnet/simgen.hpp"
#include "attnet/stats.hpp"

namespace py = pybind11;
using namespace attnet;

namespace {

using Arc = std::tuple<std::string, std::string, double>;

AttentionNetwork network_from(const std::vector<Arc>& arcs) {
    AttentionNetwork n;
    for (const auto& [s, t, w] : arcs) n.add_weight(CountryCode(s), CountryCode(t), w);
    return n;
}

py::dict test_result(const stats::TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["p"] = r.p;
    d["method"] = r.method;
    return d;
}

py::dict run(const std::filesystem::path& config, std::optional<std::filesystem::path> output,
             std::optional<int> workers, std::optional<std::vector<std::string>> stages, bool report) {
    auto cfg = load_config(config);
    if (output) cfg.output = *output;
    if (workers) cfg.workers = *workers;
    if (stages) {
        cfg.stages.clear();
        for (const auto& name : *stages) {
            const auto s = parse_stage(name);
            if (!s) throw ConfigError("unknown stage " + name);
            cfg.stages.insert(*s);
        }
    }
    cfg.write_report = report;
    RunSummary s;
    {
        py::gil_scoped_release release;
        s = run_pipeline(cfg);
    }
    py::dict out;
    py::dict st;
    for (const auto& x : s.stages) st[py::str(std::string(stage_name(x.stage)))] = x.status;
    out["stages"] = st;
    out["partial"] = s.partial;
    py::list files;
    for (const auto& f : s.files) files.append(f.path);
    out["files"] = files;
    out["output"] = cfg.output;
    return out;
}

}  // namespace

PYBIND11_MODULE(_attnet, m) {
    m.doc() = "Media and public attention network analysis";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<StageError>(m, "StageError", PyExc_RuntimeError);
    py::register_exception<Error>(m, "AttnetError", PyExc_RuntimeError);

    m.def("run", &run, py::arg("config"), py::arg("output") = py::none(), py::arg("workers") = py::none(),
          py::arg("stages") = py::none(), py::arg("report") = true,
          "Run the pipeline from a JSON config; returns stage statuses and written files.");

    m.def(
        "simgen",
        [](const std::filesystem::path& out, std::optional<std::uint64_t> seed) {
            auto spec = bundled_fixture_spec();
            if (seed) spec.seed = *seed;
            write_fixture(spec, out);
        },
        py::arg("out"), py::arg("seed") = py::none(), "Write the bundled synthetic world to a directory.");

    m.def("gini", [](const std::vector<double>& x) { return stats::gini(x); });
    m.def(
        "chi2_test_2x2",
        [](const std::array<std::array<long long, 2>, 2>& t, bool continuity) {
            return test_result(stats::chi2_test_2x2(t, continuity));
        },
        py::arg("table"), py::arg("continuity") = true);
    m.def(
        "mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b, const std::string& method) {
            stats::MwMethod mm = stats::MwMethod::Auto;
            if (method == "exact") mm = stats::MwMethod::Exact;
            else if (method == "asymptotic") mm = stats::MwMethod::Asymptotic;
            else if (method != "auto") throw py::value_error("method must be auto, exact or asymptotic");
            return test_result(stats::mann_whitney_u(a, b, mm));
        },
        py::arg("a"), py::arg("b"), py::arg("method") = "auto");
    m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
        return test_result(stats::spearman(x, y));
    });
    m.def("f_sf", &stats::f_sf, py::arg("x"), py::arg("d1"), py::arg("d2"));

    m.def(
        "granger_test",
        [](const std::vector<double>& x, const std::vector<double>& y, int lag) {
            const auto t = granger_test(x, y, lag);
            py::dict d;
            d["lag"] = t.lag;
            d["F"] = t.F;
            d["p"] = t.p;
            d["df_num"] = t.df_num;
            d["df_den"] = t.df_den;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("lag"));

    m.def(
        "triad_census",
        [](const std::vector<Arc>& arcs) {
            const auto c = triad_census(network_from(arcs));
            py::dict d;
            for (int i = 0; i < kTriadClasses; ++i) {
                d[py::str(std::string(triad_name(static_cast<TriadClass>(i))))] = c.counts[static_cast<std::size_t>(i)];
            }
            return d;
        },
        py::arg("arcs"), "Census of connected triads for (source, target, weight) arcs.");

    m.def(
        "disparity_backbone",
        [](const std::vector<Arc>& arcs, double alpha) {
            std::vector<Arc> out;
            for (const auto& [k, w] : disparity_backbone(network_from(arcs), {alpha}).edges) {
                out.emplace_back(k.first.str(), k.second.str(), w);
            }
            return out;
        },
        py::arg("arcs"), py::arg("alpha") = 0.05);
}
