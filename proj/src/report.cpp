#include "sedop/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>

#include "sedop/basis.hpp"
#include "sedop/diagnostics.hpp"
#include "sedop/dirichlet.hpp"
#include "sedop/errors.hpp"
#include "sedop/fock.hpp"
#include "sedop/rng.hpp"
#include "sedop/segal.hpp"
#include "sedop/version.hpp"

namespace sedop {

namespace {

using njson = nlohmann::ordered_json;

constexpr int kUlcGridResolution = 20001;
constexpr std::int64_t kDimBudget = 200000;

const std::vector<std::string> kTaskOrder = {"assemble", "decompose", "segal", "theorem2",
                                             "theorem3"};

[[noreturn]] void cfg_fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config " + path + ": " + msg);
}

void require_keys(const njson& j, const std::string& path, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (allowed.find(it.key()) == allowed.end()) cfg_fail(path, "unknown key '" + it.key() + "'");
}

const njson& member(const njson& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) cfg_fail(path, std::string("missing key '") + key + "'");
    return *it;
}

int parse_bounded_int(const njson& j, const std::string& path, long lo, long hi) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        cfg_fail(path, "expected an integer");
    const long v = j.get<long>();
    if (v < lo || v > hi)
        cfg_fail(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    return static_cast<int>(v);
}

double parse_positive(const njson& j, const std::string& path) {
    if (!j.is_number()) cfg_fail(path, "expected a number");
    const double v = j.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) cfg_fail(path, "expected a positive finite number");
    return v;
}

Potential1D parse_factor(const njson& j, const std::string& path) {
    if (!j.is_object()) cfg_fail(path, "expected an object");
    require_keys(j, path, {"kind", "coeffs", "variance"});
    const njson& kindj = member(j, "kind", path);
    if (!kindj.is_string()) cfg_fail(path + ".kind", "expected a string");
    const std::string kind = kindj.get<std::string>();
    if (kind == "gaussian") {
        return Potential1D::gaussian(parse_positive(member(j, "variance", path), path + ".variance"));
    }
    if (kind == "polynomial") {
        const njson& cj = member(j, "coeffs", path);
        if (!cj.is_array() || cj.empty()) cfg_fail(path + ".coeffs", "expected a nonempty array");
        std::vector<double> coeffs;
        for (std::size_t i = 0; i < cj.size(); ++i) {
            if (!cj[i].is_number())
                cfg_fail(path + ".coeffs[" + std::to_string(i) + "]", "expected a number");
            coeffs.push_back(cj[i].get<double>());
        }
        try {
            return Potential1D::polynomial(coeffs);
        } catch (const Error& e) {
            cfg_fail(path + ".coeffs", e.what());
        }
    }
    cfg_fail(path + ".kind", "expected 'polynomial' or 'gaussian'");
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::string iso_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_of_spectrum(const std::vector<double>& eig) {
    std::string s = "index,eigenvalue\n";
    for (std::size_t i = 0; i < eig.size(); ++i) {
        s += std::to_string(i);
        s += ',';
        s += format_g17(eig[i]);
        s += '\n';
    }
    return s;
}

njson check_json(const std::string& name, double value, double tol, bool pass,
                 const std::string& detail = "") {
    njson c;
    c["name"] = name;
    c["verdict"] = pass ? "pass" : "fail";
    c["value"] = value;
    c["tolerance"] = tol;
    if (!detail.empty()) c["detail"] = detail;
    return c;
}

njson item_json(const ConditionItem& it) {
    njson c;
    c["name"] = it.name;
    c["verdict"] = it.verdict;
    c["detail"] = it.detail;
    c["source"] = it.source;
    c["value"] = it.value;
    c["se"] = it.se;
    c["reference"] = it.reference;
    return c;
}

njson spectrum_json(const std::vector<double>& eig) {
    njson a = njson::array();
    for (double v : eig) a.push_back(v);
    return a;
}

struct TaskContext {
    const ExperimentConfig& cfg;
    const ProductMeasure& pm;
    const std::vector<PolyBasis>& bases;
    double tol(const std::string& name) const {
        auto it = cfg.tolerances.find(name);
        if (it == cfg.tolerances.end()) throw Error("run: unknown tolerance '" + name + "'");
        return it->second;
    }
};

// Appends checks for H itself: symmetry, the constant function in the kernel,
// and the spectral gap against the curvature floor.
njson run_assemble(const TaskContext& ctx, double ulcConstant, std::vector<double>& spectrumOut) {
    njson rec;
    rec["task"] = "assemble";
    OperatorMatrix H = assemble_h_mu(ctx.pm, ctx.bases);
    njson checks = njson::array();

    const double sym = H.symmetry_defect();
    checks.push_back(check_json("symmetry", sym, ctx.tol("symmetry"), sym <= ctx.tol("symmetry")));

    const double kernelResidual = H.entries.col(0).norm();
    checks.push_back(check_json("constant-in-kernel", kernelResidual, ctx.tol("kernel"),
                                kernelResidual <= ctx.tol("kernel"),
                                "norm of the column of the constant function"));

    std::vector<double> spec = H.reliable_spectrum();
    double gap = std::numeric_limits<double>::quiet_NaN();
    bool gapPass = true;
    if (spec.size() >= 2) {
        gap = spec[1];
        gapPass = gap >= ulcConstant - ctx.tol("gap");
    }
    checks.push_back(check_json("spectral-gap", gap, ctx.tol("gap"), gapPass,
                                "first nonzero eigenvalue vs curvature floor " +
                                    format_g17(ulcConstant)));

    rec["checks"] = checks;
    rec["spectrum"] = spectrum_json(spec);
    spectrumOut = spec;
    return rec;
}

njson run_decompose(const TaskContext& ctx, std::vector<double>& spectrumOut) {
    njson rec;
    rec["task"] = "decompose";
    const int N = ctx.cfg.N;
    njson checks = njson::array();

    OperatorMatrix H = assemble_h_mu(ctx.pm, ctx.bases);
    OperatorMatrix lap = assemble_laplacian(ctx.pm, ctx.bases, N);
    const Eigen::Index xdim = H.entries.rows();
    const double level0 =
        (lap.entries.topLeftCorner(xdim, xdim) - H.entries).cwiseAbs().maxCoeff();
    checks.push_back(check_json("extension-level0", level0, ctx.tol("extension"),
                                level0 <= ctx.tol("extension"),
                                "vacuum block of the extension operator against H"));

    auto [dmat, dstar] = assemble_delta_matrices(ctx.pm, ctx.bases, N);
    std::mt19937_64 g = rng::engine_for(ctx.cfg.seed, 9001);
    double worst = 0.0;
    const std::vector<int>& rel = dmat.reliable;
    const Eigen::Index dim = dmat.entries.rows();
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(dim), v = Eigen::VectorXd::Zero(dim);
        for (int i : rel) u(i) = 2.0 * rng::uniform01(g) - 1.0;
        for (int i : rel) v(i) = 2.0 * rng::uniform01(g) - 1.0;
        const double a = (dmat.entries * u).dot(v);
        const double b = u.dot(dstar.entries * v);
        worst = std::max(worst, std::abs(a - b) / (1.0 + u.norm() * v.norm()));
    }
    checks.push_back(check_json("duality", worst, ctx.tol("duality"), worst <= ctx.tol("duality"),
                                "raising against lowering over 200 random reliable pairs"));

    Theorem1Decomposition dec = decompose_theorem1(ctx.pm, ctx.bases, N);
    checks.push_back(check_json("decomposition-symmetry", dec.symmetryResidual, ctx.tol("symmetry"),
                                dec.symmetryResidual <= ctx.tol("symmetry")));
    checks.push_back(check_json("positivity", dec.minReliableEigenvalue, ctx.tol("positivity"),
                                dec.minReliableEigenvalue >= -ctx.tol("positivity"),
                                "smallest reliable eigenvalue of the cross term"));

    rec["checks"] = checks;
    std::vector<double> spec = lap.reliable_spectrum();
    rec["spectrum"] = spectrum_json(spec);
    spectrumOut = spec;
    return rec;
}

njson run_segal(const TaskContext& ctx, std::vector<double>& spectrumOut) {
    njson rec;
    rec["task"] = "segal";
    const int N = ctx.cfg.N;
    njson checks = njson::array();

    BoldDelta bd = assemble_bold_delta(ctx.pm, ctx.bases, N);
    checks.push_back(check_json("segal-gram", bd.map.gramResidual, ctx.tol("segal_gram"),
                                bd.map.gramResidual <= ctx.tol("segal_gram"),
                                "orthonormality defect of the transformed basis"));

    OperatorMatrix lap = assemble_laplacian(ctx.pm, ctx.bases, N);
    std::vector<double> specA = lap.reliable_spectrum();
    std::vector<double> specB = bd.conjugated.op.reliable_spectrum();
    double specDiff = 0.0;
    for (std::size_t i = 0; i < specA.size() && i < specB.size(); ++i)
        specDiff = std::max(specDiff, std::abs(specA[i] - specB[i]));
    checks.push_back(check_json("spectral-invariance", specDiff, ctx.tol("segal_spectra"),
                                specDiff <= ctx.tol("segal_spectra"),
                                "sorted reliable spectra before and after transport"));

    GammaMuSpace space = space_for(ctx.bases, N);
    const Eigen::Index F = static_cast<Eigen::Index>(space.fock.size());
    const Eigen::Index xdim = space.poly.dim();
    OperatorMatrix H = assemble_h_mu(ctx.pm, ctx.bases);
    double ydeg0 = 0.0;
    for (Eigen::Index c = 0; c < xdim; ++c)
        for (Eigen::Index r = 0; r < xdim; ++r)
            ydeg0 = std::max(ydeg0,
                             std::abs(bd.conjugated.op.entries(r * F, c * F) - H.entries(r, c)));
    checks.push_back(check_json("extension-ydeg0", ydeg0, ctx.tol("extension"),
                                ydeg0 <= ctx.tol("extension"),
                                "gaussian-degree-zero block of the transported operator against H"));

    if (ctx.pm.d() == 1) {
        checks.push_back(check_json("identity-1d", bd.identity1dResidual, ctx.tol("identity_1d"),
                                    bd.identity1dResidual <= ctx.tol("identity_1d"),
                                    "transported operator against H x 1 + 1 x H_yR + 2 H x OU"));
    }
    njson cross;
    cross["name"] = "cross-term-constant";
    cross["verdict"] = "info";
    cross["best_fit_c"] = bd.cBest;
    cross["residual_c1"] = bd.residualC1;
    cross["residual_c2"] = bd.residualC2;
    cross["detail"] = "reliable-block residual of the four-term display against the subtraction";
    checks.push_back(cross);

    rec["checks"] = checks;
    rec["spectrum"] = spectrum_json(specB);
    spectrumOut = specB;
    return rec;
}

njson condition_report_json(const ConditionReport& cr) {
    njson rec;
    rec["task"] = cr.task;
    rec["verdict"] = cr.verdict;
    njson items = njson::array();
    for (const ConditionItem& it : cr.items) items.push_back(item_json(it));
    rec["items"] = items;
    if (!cr.refinements.empty()) {
        njson refs = njson::array();
        for (const RefinementPoint& p : cr.refinements) {
            njson r;
            r["k"] = p.K;
            r["n"] = p.N;
            r["eigenvalues"] = spectrum_json(p.eigenvalues);
            refs.push_back(r);
        }
        rec["refinements"] = refs;
    }
    return rec;
}

} // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t = {
        {"symmetry", 1e-10},  {"kernel", 1e-10},       {"gap", 1e-6},
        {"extension", 1e-8},  {"duality", 1e-8},       {"positivity", 1e-8},
        {"segal_gram", 1e-8}, {"segal_spectra", 1e-8}, {"identity_1d", 1e-8}};
    return t;
}

ExperimentConfig parse_config(const njson& j) {
    if (!j.is_object()) cfg_fail("", "expected a JSON object");
    require_keys(j, "", {"measure", "truncation", "tasks", "seed", "mc_samples",
                         "minus_norm_weights", "tolerances", "out_dir"});
    ExperimentConfig cfg;
    cfg.echo = j;

    const njson& meas = member(j, "measure", "");
    if (!meas.is_object()) cfg_fail(".measure", "expected an object");
    require_keys(meas, ".measure", {"factors", "factor", "d"});
    if (meas.contains("factors")) {
        if (meas.contains("factor") || meas.contains("d"))
            cfg_fail(".measure", "'factors' excludes 'factor' and 'd'");
        const njson& arr = meas["factors"];
        if (!arr.is_array() || arr.empty()) cfg_fail(".measure.factors", "expected a nonempty array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.factors.push_back(
                parse_factor(arr[i], ".measure.factors[" + std::to_string(i) + "]"));
    } else {
        Potential1D p = parse_factor(member(meas, "factor", ".measure"), ".measure.factor");
        int d = 1;
        if (meas.contains("d")) d = parse_bounded_int(meas["d"], ".measure.d", 1, 16);
        for (int i = 0; i < d; ++i) cfg.factors.push_back(p);
    }
    const int d = static_cast<int>(cfg.factors.size());
    if (d > 16) cfg_fail(".measure.factors", "at most 16 coordinates supported");

    const njson& tr = member(j, "truncation", "");
    if (!tr.is_object()) cfg_fail(".truncation", "expected an object");
    require_keys(tr, ".truncation", {"k", "n"});
    cfg.K = parse_bounded_int(member(tr, "k", ".truncation"), ".truncation.k", 1, 64);
    cfg.N = parse_bounded_int(member(tr, "n", ".truncation"), ".truncation.n", 0, 64);

    double polyDim = 1.0;
    for (int i = 0; i < d; ++i) polyDim *= static_cast<double>(cfg.K + 1);
    const double dim = polyDim * static_cast<double>(binomial(cfg.N + d, d));
    if (!(dim <= static_cast<double>(kDimBudget)))
        cfg_fail(".truncation", "total dimension " + std::to_string(dim) + " exceeds the budget of " +
                                    std::to_string(kDimBudget));

    const njson& tasks = member(j, "tasks", "");
    if (!tasks.is_array() || tasks.empty()) cfg_fail(".tasks", "expected a nonempty array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!tasks[i].is_string()) cfg_fail(".tasks[" + std::to_string(i) + "]", "expected a string");
        const std::string t = tasks[i].get<std::string>();
        if (std::find(kTaskOrder.begin(), kTaskOrder.end(), t) == kTaskOrder.end())
            cfg_fail(".tasks[" + std::to_string(i) + "]", "unknown task '" + t + "'");
        if (!seen.insert(t).second)
            cfg_fail(".tasks[" + std::to_string(i) + "]", "duplicate task '" + t + "'");
    }
    for (const std::string& t : kTaskOrder)
        if (seen.count(t)) cfg.tasks.push_back(t);
    if (seen.count("theorem2") && d != 1)
        cfg_fail(".tasks", "theorem2 requires a one-dimensional measure");

    if (j.contains("seed")) {
        const njson& s = j["seed"];
        if (s.is_number_unsigned())
            cfg.seed = s.get<std::uint64_t>();
        else if (s.is_number_integer() && s.get<std::int64_t>() >= 0)
            cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
        else
            cfg_fail(".seed", "expected a nonnegative integer");
    }
    if (j.contains("mc_samples")) {
        if (!j["mc_samples"].is_number_integer() && !j["mc_samples"].is_number_unsigned())
            cfg_fail(".mc_samples", "expected an integer");
        cfg.mcSamples = j["mc_samples"].get<std::int64_t>();
        if (cfg.mcSamples < 2 || cfg.mcSamples > 1000000000)
            cfg_fail(".mc_samples", "expected between 2 and 1e9 samples");
    }

    cfg.minusWeights.assign(static_cast<std::size_t>(d), 1.0);
    if (j.contains("minus_norm_weights")) {
        const njson& w = j["minus_norm_weights"];
        if (!w.is_array() || static_cast<int>(w.size()) != d)
            cfg_fail(".minus_norm_weights", "expected an array with one entry per coordinate");
        for (std::size_t i = 0; i < w.size(); ++i)
            cfg.minusWeights[i] =
                parse_positive(w[i], ".minus_norm_weights[" + std::to_string(i) + "]");
    }

    cfg.tolerances = default_tolerances();
    if (j.contains("tolerances")) {
        const njson& tol = j["tolerances"];
        if (!tol.is_object()) cfg_fail(".tolerances", "expected an object");
        for (auto it = tol.begin(); it != tol.end(); ++it) {
            if (cfg.tolerances.find(it.key()) == cfg.tolerances.end())
                cfg_fail(".tolerances", "unknown tolerance '" + it.key() + "'");
            cfg.tolerances[it.key()] = parse_positive(it.value(), ".tolerances." + it.key());
        }
    }

    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) cfg_fail(".out_dir", "expected a string");
        cfg.outDir = j["out_dir"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    njson j;
    try {
        j = njson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return parse_config(j);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    njson& report = res.report;
    report["meta"] = njson::object();
    report["version"] = kVersion;
    report["seed"] = cfg.seed;
    {
        njson tr;
        tr["k"] = cfg.K;
        tr["n"] = cfg.N;
        tr["d"] = static_cast<int>(cfg.factors.size());
        report["truncation"] = tr;
    }
    {
        njson tol;
        for (const auto& [name, value] : cfg.tolerances) tol[name] = value;
        report["tolerances"] = tol;
    }
    report["config_echo"] = cfg.echo;

    bool anyFail = false, anyError = false;
    njson tasks = njson::array();
    std::vector<std::pair<std::string, std::string>> csvFiles;  // filename, content

    try {
        ProductMeasure pm;
        for (const Potential1D& p : cfg.factors) pm.factors.push_back(build_measure(p));

        const double ulc = ulc_infimum(pm, kUlcGridResolution);
        njson ulcj;
        ulcj["constant"] = ulc;
        ulcj["grid_resolution"] = kUlcGridResolution;
        ulcj["verdict"] = (ulc > 0.0) ? "pass" : "fail";
        report["ulc"] = ulcj;

        if (ulc > 0.0) {
            std::vector<PolyBasis> bases;
            for (const Measure1D& f : pm.factors) bases.push_back(build_basis(f, cfg.K));
            TaskContext ctx{cfg, pm, bases};

            for (const std::string& task : cfg.tasks) {
                try {
                    njson rec;
                    std::vector<double> spectrum;
                    if (task == "assemble") {
                        rec = run_assemble(ctx, ulc, spectrum);
                        csvFiles.emplace_back("spectrum_h.csv", csv_of_spectrum(spectrum));
                        rec["spectrum_csv"] = "spectrum_h.csv";
                    } else if (task == "decompose") {
                        rec = run_decompose(ctx, spectrum);
                        csvFiles.emplace_back("spectrum_extension.csv", csv_of_spectrum(spectrum));
                        rec["spectrum_csv"] = "spectrum_extension.csv";
                    } else if (task == "segal") {
                        rec = run_segal(ctx, spectrum);
                        csvFiles.emplace_back("spectrum_transported.csv", csv_of_spectrum(spectrum));
                        rec["spectrum_csv"] = "spectrum_transported.csv";
                    } else if (task == "theorem2") {
                        ConditionReport cr =
                            theorem2_check(pm.factors[0], {{6, 4}, {8, 5}, {10, 6}});
                        rec = condition_report_json(cr);
                        if (cr.verdict != "consistent") anyFail = true;
                    } else if (task == "theorem3") {
                        MinusNorm norm{cfg.minusWeights};
                        ConditionReport cr = theorem3_check(pm, norm, cfg.mcSamples, cfg.seed);
                        rec = condition_report_json(cr);
                        if (cr.verdict != "pass") anyFail = true;
                    }
                    if (rec.contains("checks"))
                        for (const njson& c : rec["checks"])
                            if (c["verdict"] == "fail") anyFail = true;
                    tasks.push_back(rec);
                } catch (const Error& e) {
                    njson rec;
                    rec["task"] = task;
                    rec["error"] = e.what();
                    tasks.push_back(rec);
                    anyError = true;
                }
            }
        } else {
            anyFail = true;  // curvature gate: operator theory below needs a positive floor
        }
    } catch (const Error& e) {
        njson err;
        err["error"] = e.what();
        tasks.push_back(err);
        anyError = true;
    }

    report["tasks"] = tasks;
    res.exitCode = anyError ? 1 : (anyFail ? 2 : 0);
    report["exit_code"] = res.exitCode;

    const auto t1 = std::chrono::steady_clock::now();
    njson meta;
    meta["timestamp"] = iso_utc_now();
    meta["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    report["meta"] = meta;

    std::string outDir = cfg.outDir;
    if (outDir.empty()) {
        const char* env = std::getenv("SEDOP_OUT_DIR");
        outDir = (env && *env) ? env : ".";
    }
    std::filesystem::create_directories(outDir);
    const std::string reportPath = outDir + "/report.json";
    {
        std::ofstream out(reportPath, std::ios::binary);
        if (!out) throw Error("run: cannot write '" + reportPath + "'");
        out << report.dump(2) << '\n';
    }
    res.writtenFiles.push_back(reportPath);
    for (const auto& [name, content] : csvFiles) {
        const std::string path = outDir + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("run: cannot write '" + path + "'");
        out << content;
        res.writtenFiles.push_back(path);
    }
    return res;
}

std::string explain_report(const njson& report) {
    std::string s;
    s += "report version " + report.value("version", std::string("?")) + ", seed " +
         (report.contains("seed") ? report["seed"].dump() : std::string("?")) + "\n";
    if (report.contains("ulc")) {
        const njson& u = report["ulc"];
        const bool pass = u.value("verdict", std::string()) == "pass";
        const double c = u.value("constant", 0.0);
        s += std::string("ULC: ") + (pass ? "PASS" : "FAIL") + " (min V'' = " + format_g17(c) +
             ")\n";
    }
    const njson tasks = report.value("tasks", njson::array());
    if (tasks.empty()) {
        s += "nothing to summarize\n";
        return s;
    }
    for (const njson& t : tasks) {
        if (t.contains("error")) {
            s += "task " + t.value("task", std::string("?")) + ": ERROR " +
                 t.value("error", std::string()) + "\n";
            continue;
        }
        const std::string name = t.value("task", std::string("?"));
        if (t.contains("verdict")) s += "task " + name + ": " + t["verdict"].get<std::string>() + "\n";
        else s += "task " + name + ":\n";
        if (t.contains("checks"))
            for (const njson& c : t["checks"]) {
                const std::string v = c.value("verdict", std::string("?"));
                s += "  " + c.value("name", std::string("?")) + ": " +
                     (v == "pass" ? "pass" : (v == "fail" ? "FAIL" : v));
                if (c.contains("value") && c["value"].is_number())
                    s += " (value " + format_g17(c["value"].get<double>()) +
                         (c.contains("tolerance") && c["tolerance"].is_number()
                              ? ", tolerance " + format_g17(c["tolerance"].get<double>())
                              : std::string()) +
                         ")";
                s += "\n";
            }
        if (t.contains("items"))
            for (const njson& c : t["items"]) {
                const std::string v = c.value("verdict", std::string("?"));
                s += "  " + c.value("name", std::string("?")) + ": " +
                     (v == "pass" ? "pass" : (v == "fail" ? "FAIL" : v));
                if (c.contains("value") && c["value"].is_number()) {
                    s += " (estimate " + format_g17(c["value"].get<double>());
                    if (c.contains("reference") && c["reference"].is_number())
                        s += ", reference " + format_g17(c["reference"].get<double>());
                    s += ")";
                }
                s += "\n";
            }
    }
    if (report.contains("exit_code")) s += "exit code " + report["exit_code"].dump() + "\n";
    return s;
}

} // namespace sedop
