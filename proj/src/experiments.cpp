#include "dicke/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace dicke::experiments {

namespace {

constexpr double kPi = std::numbers::pi;

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

std::string join_doubles(const std::vector<double>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << format_double(v[i]);
    return os.str();
}

std::string grid_text(const GridSpec& g) {
    std::ostringstream os;
    os << format_double(g.min) << ":" << format_double(g.max) << ":" << g.points;
    return os.str();
}

// config echo for the output metadata; the destination path is deliberately
// not part of it so identical configs give identical bytes wherever written
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c,
                                                             const GridSpec& grid_used) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("scenario", c.scenario);
    meta.emplace_back("n", join_ints(c.n_values));
    meta.emplace_back("k_max", std::to_string(c.k_max));
    meta.emplace_back("theta_grid", grid_used.points > 0 ? grid_text(grid_used) : "");
    meta.emplace_back("chi", join_doubles(c.chi_values));
    meta.emplace_back("m", join_doubles(c.m_values));
    meta.emplace_back("theta1", format_double(c.theta1));
    meta.emplace_back("format", c.format);
    meta.emplace_back("workers", std::to_string(c.workers));
    return meta;
}

int default_k_max(const RunConfig& c, int fallback) {
    if (c.k_max >= 0)
        return c.k_max;
    return fallback;
}

void require(bool cond, const std::string& what) {
    if (!cond)
        throw std::invalid_argument(what);
}

// method-of-moments error with the two-sided limit at stationary points
double mom_error_limit(const Probe& probe, const MatrixXcd& gen, const MatrixXcd& obs,
                       double theta) {
    const MomError r = mom_error(probe, gen, obs, theta);
    if (!r.infinite)
        return r.value;
    const double delta = 1e-4;
    const MomError rp = mom_error(probe, gen, obs, theta + delta);
    const MomError rm = mom_error(probe, gen, obs, theta - delta);
    if (!rp.infinite && !rm.infinite)
        return 0.5 * (rp.value + rm.value);
    if (!rp.infinite)
        return rp.value;
    if (!rm.infinite)
        return rm.value;
    return std::numeric_limits<double>::infinity();
}

} // namespace

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    require(p1 != std::string::npos && p2 != std::string::npos,
            "theta grid must be min:max:points, got '" + text + "'");
    try {
        g.min = std::stod(text.substr(0, p1));
        g.max = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
        g.points = std::stoi(text.substr(p2 + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("could not parse theta grid '" + text + "'");
    }
    return g;
}

std::vector<double> realize_grid(const GridSpec& g) {
    require(g.points >= 2, "grid needs at least 2 points");
    require(g.max > g.min, "grid needs max > min");
    std::vector<double> out(g.points);
    const double step = (g.max - g.min) / (g.points - 1);
    for (int i = 0; i < g.points; ++i) {
        double v = g.min + i * step;
        if (std::abs(v) < 1e-12)
            v = 0.0;
        out[i] = v;
    }
    out.back() = g.max;
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void parallel_for_indexed(int count, int workers,
                          const std::function<void(int)>& fn) {
    const int nw = std::max(1, std::min(workers, count));
    if (nw == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int t = 0; t < nw; ++t)
        pool.emplace_back(body);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

Table run_fig1a(const RunConfig& config) {
    const int n = config.n_values.empty() ? 64 : config.n_values.front();
    require(n > 0 && n % 2 == 0, "fig1a: N must be even");
    std::vector<double> ms = config.m_values;
    if (ms.empty())
        ms = {0, 4, 8, 16};
    const GridSpec grid = config.theta_grid.value_or(GridSpec{-kPi, kPi, 101});
    const std::vector<double> thetas = realize_grid(grid);

    const SpinSector sector(n);
    const SpinOperators ops = build_spin_operators(sector);
    const MatrixXcd par = parity_operator(sector);
    const MatrixXcd jz2 = build_observable(sector, ObservableKind::JzSquared);

    Table t;
    t.name = "fig1a";
    t.columns = {"m", "theta", "mom_error_parity", "mom_error_combined", "1/qfi"};
    t.metadata = config_echo(config, grid);
    const int total = static_cast<int>(ms.size() * thetas.size());
    t.rows.resize(total);
    parallel_for_indexed(total, config.workers, [&](int idx) {
        const int mi = idx / static_cast<int>(thetas.size());
        const int ti = idx % static_cast<int>(thetas.size());
        const double m = ms[mi];
        const double theta = thetas[ti];
        const Probe probe = Probe::pure(dicke_state(sector, m));
        const double err_par = mom_error_limit(probe, ops.jy, par, theta);
        const MomentMatrixResult snr = generalized_snr(probe, {par, jz2}, ops.jy, theta);
        const double err_comb =
            snr.snr > 0 ? 1.0 / snr.snr : std::numeric_limits<double>::infinity();
        const double f = qfi_pure(dicke_state(sector, m), ops.jy);
        t.rows[idx] = {m, theta, err_par, err_comb, 1.0 / f};
    });
    return t;
}

std::vector<Table> run_fig1bc(const RunConfig& config) {
    const int n = config.n_values.empty() ? 40 : config.n_values.front();
    require(n > 0 && n % 2 == 0, "fig1bc: N must be even");
    std::vector<double> chis = config.chi_values;
    if (chis.empty())
        chis = {0.0, 0.20, 0.39, 0.59, kPi / 4.0};
    const GridSpec grid = config.theta_grid.value_or(GridSpec{-kPi / 2.0, kPi / 2.0, 201});
    const std::vector<double> thetas = realize_grid(grid);
    const SpinSector sector(n);

    Table post;
    post.name = "posterior";
    post.columns = {"theta"};
    post.metadata = config_echo(config, grid);
    for (size_t c = 0; c < chis.size(); ++c) {
        post.columns.push_back("posterior_chi" + std::to_string(c));
        post.metadata.emplace_back("chi" + std::to_string(c), format_double(chis[c]));
    }
    Eigen::VectorXd tgrid(thetas.size());
    for (size_t i = 0; i < thetas.size(); ++i)
        tgrid(static_cast<int>(i)) = thetas[i];
    std::vector<Eigen::VectorXd> densities(chis.size());
    parallel_for_indexed(static_cast<int>(chis.size()), config.workers, [&](int c) {
        densities[c] = bayes_posterior(sector, chis[c], 0.0, tgrid);
    });
    post.rows.resize(thetas.size());
    for (size_t i = 0; i < thetas.size(); ++i) {
        std::vector<double> row{thetas[i]};
        for (const auto& d : densities)
            row.push_back(d(static_cast<int>(i)));
        post.rows[i] = std::move(row);
    }

    Table qfi;
    qfi.name = "qfi_vs_chi";
    qfi.columns = {"chi", "qfi"};
    qfi.metadata = config_echo(config, grid);
    Eigen::VectorXd cgrid(chis.size());
    for (size_t i = 0; i < chis.size(); ++i)
        cgrid(static_cast<int>(i)) = chis[i];
    const Eigen::VectorXd fvals = qfi_vs_chi(sector, cgrid);
    for (size_t i = 0; i < chis.size(); ++i)
        qfi.rows.push_back({chis[i], fvals(static_cast<int>(i))});

    return {std::move(post), std::move(qfi)};
}

namespace {

// weights after K losses from the TF state of n particles, plus the QFI,
// computed incrementally along the chain
std::vector<double> lossy_tf_qfi_sequence(int n, int k_max, double support_tol = 1e-12) {
    const int m = n / 2;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m + 1);
    p(m) = 1.0;
    std::vector<double> out;
    out.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
            const double nk = n - (k - 1);
            Eigen::VectorXd q(m + 1);
            for (int r = 0; r <= m; ++r) {
                q(r) = (1.0 - r / nk) * p(r);
                if (r + 1 <= m)
                    q(r) += (r + 1) / nk * p(r + 1);
            }
            p = q;
        }
        const SpinSector sector(n - k);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(sector.dim());
        w.head(m + 1) = p;
        out.push_back(qfi_mixed_jy(sector, w, support_tol));
    }
    return out;
}

} // namespace

Table run_fig2a(const RunConfig& config) {
    std::vector<int> ns = config.n_values;
    if (ns.empty())
        ns = {40, 90, 120, 160};
    for (int n : ns)
        require(n > 0 && n % 2 == 0, "fig2a: N must be even");

    Table t;
    t.name = "fig2a";
    t.columns = {"N", "K", "qfi"};
    t.metadata = config_echo(config, GridSpec{});
    std::vector<std::vector<std::vector<double>>> chunks(ns.size());
    parallel_for_indexed(static_cast<int>(ns.size()), config.workers, [&](int i) {
        const int n = ns[i];
        const int k_max = default_k_max(config, n / 4);
        require(k_max < n / 2, "fig2a: K must stay below N/2 for the TF start");
        const std::vector<double> q = lossy_tf_qfi_sequence(n, k_max);
        // anchor checks from the closed forms
        const double f0 = 0.5 * n * n + n;
        if (std::abs(q[0] - f0) > 1e-9 * f0)
            throw std::runtime_error("fig2a: K=0 anchor violated for N=" + std::to_string(n));
        if (k_max >= 1) {
            const double f1 = 0.25 * n * n - 1.0;
            if (std::abs(q[1] - f1) > 1e-9 * f1)
                throw std::runtime_error("fig2a: K=1 anchor violated for N=" + std::to_string(n));
        }
        for (int k = 0; k <= k_max; ++k)
            chunks[i].push_back({static_cast<double>(n), static_cast<double>(k), q[k]});
    });
    for (auto& c : chunks)
        for (auto& row : c)
            t.rows.push_back(std::move(row));
    return t;
}

namespace {

std::pair<double, double> affine_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

std::vector<int> default_sweep_n() {
    std::vector<int> ns;
    for (int n = 16; n <= 1216; n += 100)
        ns.push_back(n);
    return ns;
}

} // namespace

Table run_fig2b(const RunConfig& config) {
    std::vector<int> ns = config.n_values.empty() ? default_sweep_n() : config.n_values;
    for (int n : ns)
        require(n >= 6 && n % 2 == 0, "fig2b: N must be even and >= 6");

    std::vector<int> ksql(ns.size());
    parallel_for_indexed(static_cast<int>(ns.size()), config.workers, [&](int i) {
        const int n = ns[i];
        const int m = n / 2;
        Eigen::VectorXd p = Eigen::VectorXd::Zero(m + 1);
        p(m) = 1.0;
        int best = -1;
        for (int k = 0; k < m; ++k) {
            if (k > 0) {
                const double nk = n - (k - 1);
                Eigen::VectorXd q(m + 1);
                for (int r = 0; r <= m; ++r) {
                    q(r) = (1.0 - r / nk) * p(r);
                    if (r + 1 <= m)
                        q(r) += (r + 1) / nk * p(r + 1);
                }
                p = q;
            }
            const SpinSector sector(n - k);
            Eigen::VectorXd w = Eigen::VectorXd::Zero(sector.dim());
            w.head(m + 1) = p;
            if (qfi_mixed_jy(sector, w) > static_cast<double>(n))
                best = k;
            else
                break;
        }
        ksql[i] = best;
    });

    Table t;
    t.name = "fig2b";
    t.columns = {"N", "K_SQL"};
    std::vector<double> xs, ys;
    for (size_t i = 0; i < ns.size(); ++i) {
        t.rows.push_back({static_cast<double>(ns[i]), static_cast<double>(ksql[i])});
        xs.push_back(ns[i]);
        ys.push_back(ksql[i]);
    }
    const auto [slope, intercept] = affine_fit(xs, ys);
    t.metadata = config_echo(config, GridSpec{});
    t.metadata.emplace_back("fit_slope", format_double(slope));
    t.metadata.emplace_back("fit_intercept", format_double(intercept));
    return t;
}

Table run_fig2c(const RunConfig& config) {
    std::vector<int> ns = config.n_values.empty() ? default_sweep_n() : config.n_values;
    for (int n : ns)
        require(n >= 16 && n % 2 == 0, "fig2c: N must be even and >= 16");

    std::vector<double> qs(ns.size());
    std::vector<int> ks(ns.size());
    parallel_for_indexed(static_cast<int>(ns.size()), config.workers, [&](int i) {
        const int n = ns[i];
        const int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        ks[i] = k;
        qs[i] = lossy_tf_qfi_sequence(n, k).back();
    });

    Table t;
    t.name = "fig2c";
    t.columns = {"N", "K", "qfi"};
    for (size_t i = 0; i < ns.size(); ++i)
        t.rows.push_back({static_cast<double>(ns[i]), static_cast<double>(ks[i]), qs[i]});
    std::vector<double> lx, ly;
    const size_t half = ns.size() / 2;
    for (size_t i = half; i < ns.size(); ++i) {
        lx.push_back(std::log(static_cast<double>(ns[i])));
        ly.push_back(std::log(qs[i]));
    }
    const auto [slope, intercept] = affine_fit(lx, ly);
    t.metadata = config_echo(config, GridSpec{});
    t.metadata.emplace_back("loglog_slope_upper_half", format_double(slope));
    t.metadata.emplace_back("loglog_intercept_upper_half", format_double(intercept));
    return t;
}

Table run_fig2d(const RunConfig& config) {
    const int n = config.n_values.empty() ? 64 : config.n_values.front();
    require(n > 0 && n % 4 == 0, "fig2d: N must be divisible by 4");
    const int k_max = default_k_max(config, 14);
    require(k_max < n / 4, "fig2d: need K < N/4 so the lossy TF comparison stays defined");
    const double sql = 0.5 * n;
    const std::vector<ObservableKind> kinds = {
        ObservableKind::Jx, ObservableKind::JzSquared, ObservableKind::JplusSquaredHc,
        ObservableKind::JzJplusHc};

    Table t;
    t.name = "fig2d";
    t.columns = {"K", "qfi11_doubled_db", "snr_local_readout_db", "qfi_tf_db"};
    t.metadata = config_echo(config, GridSpec{});
    t.metadata.emplace_back("n_doubled", std::to_string(n));
    t.metadata.emplace_back("n_tf", std::to_string(n / 2));
    t.metadata.emplace_back("sql", format_double(sql));
    t.rows.resize(k_max + 1);
    parallel_for_indexed(k_max + 1, config.workers, [&](int k) {
        const double f11 = lossy_doubled_qfi11(n, k);
        const BlockEnsemble marginal = lossy_doubled_pair1_marginal(n, k);
        const double snr = generalized_snr_blocks(marginal, kinds, config.theta1).snr;
        const DickeMixture tf = apply_loss(n / 2, n / 4, k);
        const double ftf = qfi_mixed_jy(tf);
        t.rows[k] = {static_cast<double>(k), 10.0 * std::log10(f11 / sql),
                     10.0 * std::log10(snr / sql), 10.0 * std::log10(ftf / sql)};
    });
    return t;
}

Table run_qfi(const RunConfig& config) {
    std::vector<int> ns = config.n_values.empty() ? std::vector<int>{64} : config.n_values;
    for (int n : ns)
        require(n > 0 && n % 2 == 0, "qfi: N must be even");
    const int k_max_cfg = default_k_max(config, 0);

    Table t;
    t.name = "qfi";
    t.columns = {"N", "K", "qfi"};
    t.metadata = config_echo(config, GridSpec{});
    for (int n : ns) {
        const int k_max = std::min(k_max_cfg, n / 2 - 1);
        const std::vector<double> q = lossy_tf_qfi_sequence(n, k_max);
        for (int k = 0; k <= k_max; ++k)
            t.rows.push_back({static_cast<double>(n), static_cast<double>(k), q[k]});
    }
    return t;
}

Table run_mom(const RunConfig& config) {
    const int n = config.n_values.empty() ? 64 : config.n_values.front();
    require(n > 0 && n % 2 == 0, "mom: N must be even");
    std::vector<double> ms = config.m_values.empty() ? std::vector<double>{0} : config.m_values;
    const GridSpec grid = config.theta_grid.value_or(GridSpec{-kPi, kPi, 101});
    const std::vector<double> thetas = realize_grid(grid);
    const SpinSector sector(n);
    const SpinOperators ops = build_spin_operators(sector);
    const MatrixXcd par = parity_operator(sector);
    const MatrixXcd jz2 = build_observable(sector, ObservableKind::JzSquared);

    Table t;
    t.name = "mom";
    t.columns = {"m", "theta", "mom_error_parity", "mom_error_jz2", "1/qfi"};
    t.metadata = config_echo(config, grid);
    const int total = static_cast<int>(ms.size() * thetas.size());
    t.rows.resize(total);
    parallel_for_indexed(total, config.workers, [&](int idx) {
        const int mi = idx / static_cast<int>(thetas.size());
        const int ti = idx % static_cast<int>(thetas.size());
        const double m = ms[mi];
        const double theta = thetas[ti];
        const Probe probe = Probe::pure(dicke_state(sector, m));
        const double f = qfi_pure(dicke_state(sector, m), ops.jy);
        t.rows[idx] = {m, theta, mom_error_limit(probe, ops.jy, par, theta),
                       mom_error_limit(probe, ops.jy, jz2, theta), 1.0 / f};
    });
    return t;
}

Table run_snr(const RunConfig& config) {
    const int n = config.n_values.empty() ? 64 : config.n_values.front();
    require(n > 0 && n % 2 == 0, "snr: N must be even");
    const int k = std::max(0, default_k_max(config, 0));
    const double m = config.m_values.empty() ? 0.0 : config.m_values.front();
    require(k == 0 || m == 0.0, "snr: lossy probes take the TF start (m = 0)");
    const GridSpec grid = config.theta_grid.value_or(GridSpec{-kPi, kPi, 101});
    const std::vector<double> thetas = realize_grid(grid);

    const SpinSector sector(n - k);
    const SpinOperators ops = build_spin_operators(sector);
    Probe probe;
    double qfi_value;
    if (k == 0) {
        const PureState st = dicke_state(SpinSector(n), m);
        probe = Probe::pure(st);
        qfi_value = qfi_pure(st, ops.jy);
    } else {
        const DickeMixture mix = apply_loss(n, n / 2, k);
        probe = Probe::mixed(mix);
        qfi_value = qfi_mixed_jy(mix);
    }
    std::vector<MatrixXcd> obs = {build_observable(sector, ObservableKind::JzSquared),
                                  build_observable(sector, ObservableKind::JplusSquaredHc)};
    if (k >= 2) {
        obs.insert(obs.begin(), build_observable(sector, ObservableKind::Jx));
        obs.push_back(build_observable(sector, ObservableKind::JzJplusHc));
    } else if (m != 0.0) {
        obs.push_back(build_observable(sector, ObservableKind::Jx));
    }

    Table t;
    t.name = "snr";
    t.columns = {"theta", "snr", "qfi"};
    t.metadata = config_echo(config, grid);
    t.metadata.emplace_back("observables", k >= 2 ? "jx,jz2,jp2hc,jzjphc"
                                                  : (m != 0.0 ? "jz2,jp2hc,jx" : "jz2,jp2hc"));
    t.rows.resize(thetas.size());
    parallel_for_indexed(static_cast<int>(thetas.size()), config.workers, [&](int i) {
        const MomentMatrixResult r = generalized_snr(probe, obs, ops.jy, thetas[i]);
        t.rows[i] = {thetas[i], r.snr, qfi_value};
    });
    return t;
}

std::vector<Table> run_scenario(const RunConfig& config) {
    const std::string& s = config.scenario;
    if (s == "fig1a")
        return {run_fig1a(config)};
    if (s == "fig1bc")
        return run_fig1bc(config);
    if (s == "fig2a")
        return {run_fig2a(config)};
    if (s == "fig2b")
        return {run_fig2b(config)};
    if (s == "fig2c")
        return {run_fig2c(config)};
    if (s == "fig2d")
        return {run_fig2d(config)};
    if (s == "qfi")
        return {run_qfi(config)};
    if (s == "mom")
        return {run_mom(config)};
    if (s == "snr")
        return {run_snr(config)};
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

void write_csv(const Table& table, std::ostream& os) {
    for (const auto& [k, v] : table.metadata)
        os << "# " << k << " = " << v << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << format_double(row[c]);
        os << "\n";
    }
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out.push_back('\\');
        out.push_back(ch);
    }
    return out;
}

std::string json_number(double v) {
    if (std::isfinite(v))
        return format_double(v);
    return "\"" + format_double(v) + "\"";
}

} // namespace

void write_json(const std::vector<Table>& tables, std::ostream& os) {
    os << "{\n  \"tables\": [\n";
    for (size_t t = 0; t < tables.size(); ++t) {
        const Table& tb = tables[t];
        os << "    {\n      \"name\": \"" << json_escape(tb.name) << "\",\n";
        os << "      \"metadata\": {";
        for (size_t i = 0; i < tb.metadata.size(); ++i)
            os << (i ? ", " : "") << "\"" << json_escape(tb.metadata[i].first) << "\": \""
               << json_escape(tb.metadata[i].second) << "\"";
        os << "},\n      \"columns\": [";
        for (size_t c = 0; c < tb.columns.size(); ++c)
            os << (c ? ", " : "") << "\"" << json_escape(tb.columns[c]) << "\"";
        os << "],\n      \"rows\": [\n";
        for (size_t r = 0; r < tb.rows.size(); ++r) {
            os << "        [";
            for (size_t c = 0; c < tb.rows[r].size(); ++c)
                os << (c ? ", " : "") << json_number(tb.rows[r][c]);
            os << "]" << (r + 1 < tb.rows.size() ? "," : "") << "\n";
        }
        os << "      ]\n    }" << (t + 1 < tables.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

void write_output(const std::vector<Table>& tables, const RunConfig& config) {
    if (config.format == "json") {
        if (config.out_path.empty()) {
            write_json(tables, std::cout);
            return;
        }
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open output file " + config.out_path);
        write_json(tables, f);
        return;
    }
    if (config.format != "csv")
        throw std::invalid_argument("format must be csv or json, got '" + config.format + "'");
    if (config.out_path.empty()) {
        for (const auto& t : tables)
            write_csv(t, std::cout);
        return;
    }
    if (tables.size() == 1) {
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open output file " + config.out_path);
        write_csv(tables[0], f);
        return;
    }
    const auto dot = config.out_path.rfind('.');
    const std::string stem =
        dot == std::string::npos ? config.out_path : config.out_path.substr(0, dot);
    const std::string ext = dot == std::string::npos ? ".csv" : config.out_path.substr(dot);
    for (const auto& t : tables) {
        const std::string path = stem + "_" + t.name + ext;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open output file " + path);
        write_csv(t, f);
    }
}

} // namespace dicke::experiments
