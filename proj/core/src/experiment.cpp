#include "spinctrl/experiment.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "spinctrl/csv.hpp"
#include "spinctrl/field_analysis.hpp"
#include "spinctrl/spectral_stats.hpp"

namespace spinctrl {

namespace {

constexpr double pi = 3.14159265358979323846;

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        int i;
        while ((i = next.fetch_add(1)) < n) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int count = std::min(jobs, n);
    threads.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

std::string process_name(ProcessKind p) { return p == ProcessKind::A ? "A" : "B"; }

struct SweepCell {
    ProcessKind process;
    int K;
    double gamma;
    double J;
    std::uint64_t seed;
};

std::string cell_key(const SweepCell& c) {
    return process_name(c.process) + "," + std::to_string(c.K) + "," + format_value(c.gamma) +
           "," + format_value(c.J) + "," + std::to_string(c.seed);
}

struct SweepRow {
    SweepCell cell;
    SpectralMetrics metrics;
    double fidelity = 0.0;
    int iterations = 0;
    bool converged = false;
    double delta_E = 0.0;
};

struct CellSetup {
    ParityBasis basis;
    OperatorMatrix H01;
    OperatorMatrix Hc;
    StatePair states;
    KrotovConfig krotov;
};

CellSetup prepare_cell(const ExperimentConfig& config, ProcessKind process, int K, double gamma,
                       double J, std::uint64_t seed) {
    ChainParams p = config.chain;
    p.Gamma = gamma;
    p.J = J;
    ParityBasis basis = parity_adapt(enumerate_sector(p.L, K), +1);
    OperatorMatrix H01 = build_H01(p, basis);
    OperatorMatrix Hc = build_control(p, basis, config.control);
    StatePair states;
    if (process == ProcessKind::A) {
        states = build_process_A(p.L, K, basis);
    } else {
        ChainParams p0 = p;
        p0.Gamma = 0.0;
        const Spectrum h0 = diagonalize(build_H0(p0, basis));
        states = build_process_B(basis, h0, seed);
    }
    KrotovConfig kc = config.krotov;
    if (!(kc.T > 0.0)) kc.T = config.horizon(J);
    kc.dt = config.krotov.dt / J;  // config dt is the dimensionless J*dt
    return {std::move(basis), std::move(H01), std::move(Hc), std::move(states), kc};
}

SweepRow run_cell(const ExperimentConfig& config, const SweepCell& cell) {
    CellSetup setup =
        prepare_cell(config, cell.process, cell.K, cell.gamma, cell.J, cell.seed);
    OptimizationResult result =
        optimize(setup.states.psi0, setup.states.psif, setup.H01, setup.Hc, setup.krotov);
    SweepRow row;
    row.cell = cell;
    row.metrics = analyze(result.field, config.beta_cutoff, config.remove_dc);
    row.fidelity = result.fidelity_history.back();
    row.iterations = result.iterations_used;
    row.converged = result.converged;
    row.delta_E = energy_spread(diagonalize(setup.H01));
    return row;
}

const std::vector<std::string> kSweepHeader = {
    "process", "K",        "gamma",      "J",          "seed",    "omega_bw",
    "sipr",    "siprn",    "fidelity",   "iterations", "converged", "delta_E"};

}  // namespace

void ExperimentConfig::validate() const {
    chain.validate();
    if (processes.empty()) throw std::invalid_argument("config: empty process list");
    if (k_values.empty()) throw std::invalid_argument("config: empty K list");
    if (gamma_grid.empty()) throw std::invalid_argument("config: empty gamma grid");
    if (seeds.empty()) throw std::invalid_argument("config: empty seed list");
    if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
    if (hist_bins < 1) throw std::invalid_argument("config: hist_bins must be >= 1");
    for (int k : k_values)
        if (k < 0 || k > chain.L) throw std::invalid_argument("config: K out of range");
    for (int m : m_values)
        if (m < 1) throw std::invalid_argument("config: M values must be >= 1");
    if (trim_fraction < 0.0 || trim_fraction >= 0.5)
        throw std::invalid_argument("config: trim_fraction must lie in [0, 0.5)");
}

std::vector<double> ExperimentConfig::effective_j_grid() const {
    return j_grid.empty() ? std::vector<double>{chain.J} : j_grid;
}

std::vector<double> ExperimentConfig::effective_epsilon_grid() const {
    if (!epsilon_grid.empty()) return epsilon_grid;
    std::vector<double> eps;
    for (int i = 0; i < 13; ++i) eps.push_back(-3.0 + 0.5 * i);
    return eps;
}

double ExperimentConfig::horizon(double J) const {
    if (krotov.T > 0.0) return krotov.T;
    return horizon_factor * (chain.L - 1) * pi / J;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("chain")) {
        const auto& ch = j.at("chain");
        c.chain.L = ch.value("L", c.chain.L);
        c.chain.J = ch.value("J", c.chain.J);
        c.chain.alpha_z = ch.value("alpha_z", c.chain.alpha_z);
    }
    if (j.contains("processes")) {
        c.processes.clear();
        for (const auto& p : j.at("processes")) {
            const std::string name = p.get<std::string>();
            if (name == "A")
                c.processes.push_back(ProcessKind::A);
            else if (name == "B")
                c.processes.push_back(ProcessKind::B);
            else
                throw std::invalid_argument("config: unknown process '" + name + "'");
        }
    }
    c.k_values = j.value("k_values", c.k_values);
    c.gamma_grid = j.value("gamma_grid", c.gamma_grid);
    c.j_grid = j.value("j_grid", c.j_grid);
    if (j.contains("control")) {
        const std::string kind = j.at("control").get<std::string>();
        if (kind == "local")
            c.control = ControlOperatorKind::LocalEdge;
        else if (kind == "long_range")
            c.control = ControlOperatorKind::LongRange;
        else
            throw std::invalid_argument("config: unknown control kind '" + kind + "'");
    }
    if (j.contains("krotov")) {
        const auto& k = j.at("krotov");
        c.krotov.T = k.value("T", c.krotov.T);
        c.krotov.dt = k.value("dt", c.krotov.dt);
        c.krotov.lambda0 = k.value("lambda0", c.krotov.lambda0);
        c.krotov.target_fidelity = k.value("target_fidelity", c.krotov.target_fidelity);
        c.krotov.max_iterations = k.value("max_iterations", c.krotov.max_iterations);
        c.krotov.initial_guess = k.value("initial_guess", c.krotov.initial_guess);
        c.horizon_factor = k.value("horizon_factor", c.horizon_factor);
    }
    if (j.contains("analysis")) {
        const auto& a = j.at("analysis");
        c.beta_cutoff = a.value("beta_cutoff", c.beta_cutoff);
        c.remove_dc = a.value("remove_dc", c.remove_dc);
    }
    if (j.contains("brody")) {
        const auto& b = j.at("brody");
        c.epsilon_grid = b.value("epsilon_grid", c.epsilon_grid);
        c.trim_fraction = b.value("trim_fraction", c.trim_fraction);
    }
    c.m_values = j.value("m_values", c.m_values);
    c.hist_bins = j.value("hist_bins", c.hist_bins);
    c.hist_range = j.value("hist_range", c.hist_range);
    c.seeds = j.value("seeds", c.seeds);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.jobs = j.value("jobs", c.jobs);
    c.connmap_gamma = j.value("connmap_gamma", c.connmap_gamma);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;
    auto linspace = [](double lo, double hi, int n) {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
        return v;
    };
    if (name == "desk") {
        c.chain.L = 9;
        c.processes = {ProcessKind::A};
        c.k_values = {1, 2};
        c.gamma_grid = linspace(0.0, 1.0, 11);
        c.m_values = {1, 2, 5};
    } else if (name == "paper") {
        c.chain.L = 15;
        c.processes = {ProcessKind::A, ProcessKind::B};
        c.k_values = {1, 2, 3, 4};
        c.gamma_grid = linspace(0.0, 1.0, 11);
        c.m_values = {1, 10, 35, 70};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    c.validate();
    return c;
}

SweepOutcome run_sweep(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    const std::string path = config.out_dir + "/sweep.csv";

    std::set<std::string> done;
    for (const auto& row : read_csv_rows(path))
        if (row.size() >= 5) done.insert(row[0] + "," + row[1] + "," + row[2] + "," + row[3] +
                                         "," + row[4]);

    std::vector<SweepCell> cells;
    for (ProcessKind process : config.processes)
        for (int K : config.k_values)
            for (double J : config.effective_j_grid())
                for (double gamma : config.gamma_grid)
                    for (std::uint64_t seed : config.seeds)
                        cells.push_back({process, K, gamma, J, seed});

    SweepOutcome outcome;
    std::vector<SweepCell> pending;
    for (const auto& c : cells) {
        if (done.count(cell_key(c)))
            ++outcome.cells_skipped;
        else
            pending.push_back(c);
    }

    std::vector<std::optional<SweepRow>> results(pending.size());
    parallel_for(static_cast<int>(pending.size()), config.jobs, [&](int i) {
        results[static_cast<std::size_t>(i)] =
            run_cell(config, pending[static_cast<std::size_t>(i)]);
    });

    CsvWriter out(path, kSweepHeader, /*append=*/true);
    for (const auto& maybe : results) {
        const SweepRow& r = *maybe;
        out.write_row({process_name(r.cell.process), std::to_string(r.cell.K),
                       format_value(r.cell.gamma), format_value(r.cell.J),
                       std::to_string(r.cell.seed), format_value(r.metrics.omega_bw),
                       format_value(r.metrics.sipr), format_value(r.metrics.siprn),
                       format_value(r.fidelity), std::to_string(r.iterations),
                       r.converged ? "1" : "0", format_value(r.delta_E)});
        ++outcome.cells_run;
        if (!r.converged) ++outcome.non_converged;
    }
    return outcome;
}

void run_brody_sweep(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    const std::vector<double> eps_grid = config.effective_epsilon_grid();

    struct BrodyCell {
        int K;
        double gamma;
        double eps;
    };
    std::vector<BrodyCell> cells;
    for (int K : config.k_values)
        for (double gamma : config.gamma_grid)
            for (double eps : eps_grid) cells.push_back({K, gamma, eps});

    struct BrodyRow {
        BrodyCell cell;
        BrodyFit fit;
        int levels = 0;
    };
    std::vector<BrodyRow> rows(cells.size());
    parallel_for(static_cast<int>(cells.size()), config.jobs, [&](int i) {
        const BrodyCell& cell = cells[static_cast<std::size_t>(i)];
        ChainParams p = config.chain;
        p.Gamma = cell.gamma;
        ParityBasis basis = parity_adapt(enumerate_sector(p.L, cell.K), +1);
        OperatorMatrix H = build_H01(p, basis);
        H.data += cell.eps * build_Hc(p, basis).data;
        const Spectrum spec = diagonalize(H);
        BrodyRow& row = rows[static_cast<std::size_t>(i)];
        row.cell = cell;
        row.levels = spec.dim();
        const SpacingSample sample = level_spacings(spec, config.trim_fraction);
        if (sample.values.size() >= 50) {
            row.fit = brody_fit(sample);
        } else {
            row.fit.beta = std::numeric_limits<double>::quiet_NaN();
            row.fit.b = std::numeric_limits<double>::quiet_NaN();
        }
    });

    CsvWriter out(config.out_dir + "/brody.csv",
                  {"K", "gamma", "epsilon", "beta", "b", "levels", "low_statistics"},
                  /*append=*/false);
    for (const auto& r : rows)
        out.write_row({std::to_string(r.cell.K), format_value(r.cell.gamma),
                       format_value(r.cell.eps), format_value(r.fit.beta),
                       format_value(r.fit.b), std::to_string(r.levels),
                       (r.cell.K < 3 || std::isnan(r.fit.beta)) ? "1" : "0"});

    CsvWriter mean_out(config.out_dir + "/brody_mean.csv", {"K", "gamma", "beta_mean"},
                       /*append=*/false);
    for (int K : config.k_values)
        for (double gamma : config.gamma_grid) {
            double sum = 0.0;
            int n = 0;
            for (const auto& r : rows)
                if (r.cell.K == K && r.cell.gamma == gamma) {
                    sum += r.fit.beta;
                    ++n;
                }
            mean_out.write_row(
                {std::to_string(K), format_value(gamma), format_value(sum / n)});
        }
}

void run_difference_histograms(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    CsvWriter l1_out(config.out_dir + "/diffhist_l1.csv", {"K", "M", "l1_distance"},
                     /*append=*/false);
    for (int K : config.k_values) {
        ParityBasis basis = parity_adapt(enumerate_sector(config.chain.L, K), +1);
        Spectrum spectra[2];
        for (int g = 0; g < 2; ++g) {
            ChainParams p = config.chain;
            p.Gamma = static_cast<double>(g);
            spectra[g] = diagonalize(build_H01(p, basis));
        }
        for (int M : config.m_values) {
            Histogram hists[2];
            for (int g = 0; g < 2; ++g) {
                const SpacingSample sample =
                    energy_differences(spectra[g], M, config.trim_fraction);
                hists[g] = histogram(sample, config.hist_bins, 0.0, config.hist_range);
                const std::string path = config.out_dir + "/diffhist_K" + std::to_string(K) +
                                         "_M" + std::to_string(M) + "_gamma" +
                                         std::to_string(g) + ".csv";
                CsvWriter hout(path, {"bin_left", "bin_right", "density"}, /*append=*/false);
                for (int b = 0; b < config.hist_bins; ++b)
                    hout.write_row({format_value(hists[g].edges[static_cast<std::size_t>(b)]),
                                    format_value(hists[g].edges[static_cast<std::size_t>(b) + 1]),
                                    format_value(hists[g].densities[static_cast<std::size_t>(b)])});
            }
            l1_out.write_row({std::to_string(K), std::to_string(M),
                              format_value(l1_distance(hists[0], hists[1]))});
        }
    }
}

void run_connectivity_maps(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    auto dump = [&](const std::string& name, const Eigen::MatrixXd& M) {
        CsvWriter out(config.out_dir + "/" + name + ".csv", {"row", "col", "value"},
                      /*append=*/false);
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            for (Eigen::Index c = 0; c < M.cols(); ++c)
                out.write_row({std::to_string(r), std::to_string(c),
                               format_value(std::abs(M(r, c)))});
    };
    for (int K : config.k_values) {
        ChainParams p = config.chain;
        p.Gamma = config.connmap_gamma;
        SectorBasis sector = enumerate_sector(p.L, K);
        ParityBasis plus = parity_adapt(sector, +1);
        const Spectrum spec = diagonalize(build_H01(p, plus));
        const std::string suffix = "_K" + std::to_string(K);
        dump("connmap_hc_comp" + suffix, build_Hc(p, sector).data);
        dump("connmap_hclr_comp" + suffix, build_Hc_long_range(p, sector).data);
        dump("connmap_hc_eig" + suffix,
             matrix_in_eigenbasis(build_Hc(p, plus), spec).data);
        dump("connmap_hclr_eig" + suffix,
             matrix_in_eigenbasis(build_Hc_long_range(p, plus), spec).data);
    }
}

OptimizationResult run_single_cell(const ExperimentConfig& config, ProcessKind process, int K,
                                   double gamma, std::uint64_t seed) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    CellSetup setup = prepare_cell(config, process, K, gamma, config.chain.J, seed);
    OptimizationResult result =
        optimize(setup.states.psi0, setup.states.psif, setup.H01, setup.Hc, setup.krotov);

    CsvWriter field_out(config.out_dir + "/field.csv", {"t", "epsilon"}, /*append=*/false);
    for (int j = 0; j < result.field.steps(); ++j)
        field_out.write_row({format_value(j * result.field.dt),
                             format_value(result.field.samples[static_cast<std::size_t>(j)])});

    CsvWriter hist_out(config.out_dir + "/fidelity.csv", {"iteration", "fidelity"},
                       /*append=*/false);
    for (std::size_t i = 0; i < result.fidelity_history.size(); ++i)
        hist_out.write_row({std::to_string(i), format_value(result.fidelity_history[i])});
    return result;
}

}  // namespace spinctrl
