// Command-line front end: rule dumps, single integrations, oracle checks,
// convergence and adaptive sweeps, and the vortex-ring experiment.  All
// output is CSV with 17 significant digits; repeated runs are
// byte-identical.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "tetquad/tetquad.hpp"

namespace {

using namespace tetquad;
using namespace tetquad::tools;

struct Output {
    std::string path;  // empty: stdout
    std::FILE* file = stdout;
    ~Output() {
        if (file && file != stdout) std::fclose(file);
    }
    void open() {
        if (!path.empty()) {
            file = std::fopen(path.c_str(), "w");
            if (!file) throw std::runtime_error("cannot open output file " + path);
        }
    }
    void line(const std::string& s) { std::fprintf(file, "%s\n", s.c_str()); }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Tetrahedron parse_tet(const std::string& s) {
    std::istringstream in(s);
    Tetrahedron tet;
    for (int i = 0; i < 4; ++i)
        if (!(in >> tet.nodes[static_cast<size_t>(i)].x >> tet.nodes[static_cast<size_t>(i)].y >>
              tet.nodes[static_cast<size_t>(i)].z))
            throw CLI::ValidationError("--tet", "expected 12 whitespace-separated reals");
    double extra;
    if (in >> extra) throw CLI::ValidationError("--tet", "expected exactly 12 reals");
    return tet;
}

std::array<int, 3> parse_order_triple(const std::string& s) {
    std::array<int, 3> n{};
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> n[0] >> c1 >> n[1] >> c2 >> n[2]) || c1 != ',' || c2 != ',')
        throw CLI::ValidationError("--order", "expected Ntheta,Nphi,Nrho");
    return n;
}

std::array<int, 3> parse_ijk(const std::string& s) {
    std::array<int, 3> n{};
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> n[0] >> c1 >> n[1] >> c2 >> n[2]) || c1 != ',' || c2 != ',')
        throw CLI::ValidationError("--monomial", "expected i,j,k");
    return n;
}

int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// ---- rule ----------------------------------------------------------------

void cmd_rule(const std::string& kind, int n, double gamma, Output& out) {
    const QuadratureRule1D rule =
        kind == "legendre" ? gauss_legendre(n) : gauss_jacobi(n, gamma);
    out.line("node,weight");
    for (int i = 0; i < rule.size(); ++i)
        out.line(fmt(rule.nodes[static_cast<size_t>(i)]) + "," +
                 fmt(rule.weights[static_cast<size_t>(i)]));
}

// ---- integrate -----------------------------------------------------------

void cmd_integrate(const Tetrahedron& tet, double alpha, const std::array<int, 3>& order,
                   const std::array<int, 3>& ijk, bool adaptive, double tol, double rel_tol,
                   int max_depth, Output& out) {
    const SingularitySpec spec = SingularitySpec::from_alpha(alpha);
    const SingularRules rules = make_singular_rules(order[0], order[1], order[2], spec);
    const MonomialIntegrand f{ijk[0], ijk[1], ijk[2]};
    if (!adaptive) {
        const auto r = integrate_singular(tet, f, spec, rules);
        out.line("value,evaluations");
        out.line(fmt(r.value) + "," + std::to_string(r.evaluations));
        return;
    }
    double tol_abs = tol;
    if (rel_tol > 0.0) {
        const auto pilot = integrate_singular(tet, f, spec, make_singular_rules(4, spec));
        tol_abs = rel_tol * std::abs(pilot.value);
    }
    const auto r = integrate_adaptive(tet, f, spec, rules, tol_abs, max_depth);
    out.line("value,evaluations,discrepancy");
    out.line(fmt(r.value) + "," + std::to_string(r.evaluations) + "," + fmt(r.discrepancy));
}

// ---- oracle / suite ------------------------------------------------------

void cmd_oracle(const Tetrahedron& tet, double alpha, int order, const std::array<int, 3>& ijk,
                Output& out) {
    const double v = duffy_reference(tet, MonomialIntegrand{ijk[0], ijk[1], ijk[2]}, alpha, order);
    out.line("value");
    out.line(fmt(v));
}

void cmd_suite(const Tetrahedron& tet, double alpha, int n_max, const std::vector<int>& orders,
               Output& out) {
    const auto suite = monomial_suite(tet, n_max, alpha, orders);
    out.line("order,evaluations,eps_rel");
    for (const auto& row : suite.rows)
        out.line(std::to_string(row.order) + "," + std::to_string(row.evaluations) + "," +
                 fmt(row.eps_rel));
}

// ---- converge ------------------------------------------------------------

void cmd_converge(const std::string& family, const std::vector<double>& values, double alpha,
                  const std::vector<int>& orders, int threads, Output& out) {
    struct Row {
        double param;
        MonomialSuiteRow data;
    };
    std::vector<Row> rows(values.size() * orders.size());
    detail::run_chunked(static_cast<int>(values.size()), threads, [&](int vi) {
        const double v = values[static_cast<size_t>(vi)];
        const Tetrahedron tet = family == "height" ? height_case(v)
                                : family == "angle" ? angle_case(v)
                                                    : aspect_case(v);
        const auto suite = monomial_suite(tet, 4, alpha, orders);
        for (size_t oi = 0; oi < orders.size(); ++oi)
            rows[static_cast<size_t>(vi) * orders.size() + oi] = {v, suite.rows[oi]};
    });
    out.line("param,order,evals,max_rel_error");
    for (const auto& row : rows)
        out.line(fmt(row.param) + "," + std::to_string(row.data.order) + "," +
                 std::to_string(row.data.evaluations) + "," + fmt(row.data.eps_rel));
}

// ---- adaptive sweep ------------------------------------------------------

void cmd_adaptive(const std::vector<double>& heights, const std::vector<double>& tols,
                  const std::vector<int>& orders, int max_depth, int threads, Output& out) {
    const SingularitySpec spec = SingularitySpec::from_alpha(1.0);
    struct Cell {
        double h, tol;
        int order;
        long long evals;
    };
    std::vector<Cell> cells;
    for (double h : heights)
        for (double tol : tols)
            for (int order : orders) cells.push_back({h, tol, order, 0});
    detail::run_chunked(static_cast<int>(cells.size()), threads, [&](int ci) {
        Cell& cell = cells[static_cast<size_t>(ci)];
        const auto r = integrate_adaptive(adaptive_case(cell.h), MonomialBatch<4>{}, spec,
                                          make_singular_rules(cell.order, spec), cell.tol,
                                          max_depth);
        cell.evals = r.evaluations;
    });
    out.line("h,tol,order,evals");
    for (const auto& cell : cells)
        out.line(fmt(cell.h) + "," + fmt(cell.tol) + "," + std::to_string(cell.order) + "," +
                 std::to_string(cell.evals));
}

// ---- ring ----------------------------------------------------------------

void cmd_ring(const std::string& node_file, const std::string& ele_file, double sigma,
              int fixed_degree, int singular_order, bool no_singular, bool analytic, int samples,
              int threads, Output& out) {
    TetMesh mesh = load_mesh(node_file, ele_file);
    const RingSpec ring{sigma};
    sample_vorticity(mesh, [&](const Vec3& x) { return ring_vorticity(ring, x); });

    std::vector<double> zs(static_cast<size_t>(samples));
    std::vector<Vec3> targets(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        zs[static_cast<size_t>(i)] = samples == 1 ? 0.0 : -1.0 + 2.0 * i / (samples - 1);
        targets[static_cast<size_t>(i)] = {1.0, 0.0, zs[static_cast<size_t>(i)]};
    }

    BiotSavartOptions opt;
    opt.n_theta = opt.n_phi = opt.n_rho = singular_order;
    opt.singular_correction = !no_singular;
    opt.analytic_vorticity = analytic;
    if (analytic) opt.field = [&](const Vec3& x) { return ring_vorticity(ring, x); };
    opt.threads = threads;

    const auto u = biot_savart(mesh, targets, fixed_tet_rule(fixed_degree), opt);
    const auto ref = ring_reference_profile(ring, zs, threads);

    out.line("z,u_z_computed,u_z_reference,u_r_computed,u_r_reference");
    std::vector<double> uz(u.size()), uz_ref(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
        uz[i] = u[i].z;
        uz_ref[i] = ref[i].u_z;
        out.line(fmt(zs[i]) + "," + fmt(u[i].z) + "," + fmt(ref[i].u_z) + "," + fmt(u[i].x) + "," +
                 fmt(ref[i].u_r));
    }
    out.line("error," + fmt(ring_error_metric(uz, uz_ref)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular quadrature on tetrahedra: rules, integrals, sweeps, and the "
                 "vortex-ring experiment"};
    app.require_subcommand(1);

    Output out;
    int threads = default_threads();
    app.add_option("--output", out.path, "write CSV to a file instead of stdout");
    app.add_option("--threads", threads, "parallelism bound for sweeps and targets");

    // rule
    auto* rule = app.add_subcommand("rule", "print a 1-D quadrature rule");
    std::string rule_kind;
    int rule_n = 0;
    double rule_gamma = 0.0;
    rule->add_option("--kind", rule_kind, "legendre or jacobi")
        ->required()
        ->check(CLI::IsMember({"legendre", "jacobi"}));
    rule->add_option("--n", rule_n, "rule length")->required();
    rule->add_option("--gamma", rule_gamma, "Jacobi weight exponent on (1+t)");

    // integrate
    auto* integrate = app.add_subcommand("integrate", "integrate a monomial over one tetrahedron");
    std::string tet_str, order_str, ijk_str = "0,0,0";
    double alpha = 1.0, tol = 1e-6, rel_tol = 0.0;
    bool adaptive_flag = false;
    int max_depth = 12;
    integrate->add_option("--tet", tet_str, "12 reals: x0 y0 z0 ... z3")->required();
    integrate->add_option("--alpha", alpha, "singularity exponent in 1/R^alpha")->required();
    integrate->add_option("--order", order_str, "rule lengths Ntheta,Nphi,Nrho")->required();
    integrate->add_option("--monomial", ijk_str, "exponents i,j,k (default 0,0,0)");
    integrate->add_flag("--adaptive", adaptive_flag, "refine until the split test passes");
    integrate->add_option("--tol", tol, "absolute tolerance for --adaptive");
    integrate->add_option("--rel-tol", rel_tol,
                          "relative tolerance, converted via a length-4 pilot estimate");
    integrate->add_option("--max-depth", max_depth, "split generations before giving up");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Duffy-transform reference value");
    std::string o_tet, o_ijk = "0,0,0";
    double o_alpha = 1.0;
    int o_order = 32;
    oracle->add_option("--tet", o_tet)->required();
    oracle->add_option("--alpha", o_alpha)->required();
    oracle->add_option("--order", o_order, "tensor Gauss-Legendre order (<= 32)");
    oracle->add_option("--monomial", o_ijk, "exponents i,j,k (default 0,0,0)");

    // suite
    auto* suite = app.add_subcommand("suite", "monomial-family relative-error table");
    std::string s_tet;
    double s_alpha = 1.0;
    int s_nmax = 4;
    std::vector<int> s_orders;
    suite->add_option("--tet", s_tet)->required();
    suite->add_option("--alpha", s_alpha)->required();
    suite->add_option("--nmax", s_nmax, "max total monomial degree");
    suite->add_option("--orders", s_orders, "rule lengths")->required()->delimiter(',');

    // converge
    auto* converge = app.add_subcommand("converge", "geometry-family convergence sweep");
    std::string c_case;
    std::vector<double> c_values;
    double c_alpha = 1.0;
    std::vector<int> c_orders;
    converge->add_option("--case", c_case, "height, angle, or aspect")
        ->required()
        ->check(CLI::IsMember({"height", "angle", "aspect"}));
    converge->add_option("--values", c_values, "family parameter values")
        ->required()
        ->delimiter(',');
    converge->add_option("--alpha", c_alpha)->required();
    converge->add_option("--orders", c_orders, "rule lengths")->required()->delimiter(',');

    // adaptive sweep
    auto* adapt = app.add_subcommand("adaptive", "adaptive cost sweep over heights x tolerances");
    std::vector<double> a_heights, a_tols;
    std::vector<int> a_orders;
    int a_depth = 12;
    adapt->add_option("--heights", a_heights)->required()->delimiter(',');
    adapt->add_option("--tols", a_tols)->required()->delimiter(',');
    adapt->add_option("--orders", a_orders)->required()->delimiter(',');
    adapt->add_option("--max-depth", a_depth);

    // ring
    auto* ring = app.add_subcommand("ring", "Biot-Savart vortex-ring experiment");
    std::string r_node, r_ele;
    double r_sigma = 0.3;
    int r_degree = 13, r_order = 3, r_samples = 101;
    bool r_nosing = false, r_analytic = false;
    ring->add_option("--node", r_node, "tetgen .node file")->required();
    ring->add_option("--ele", r_ele, "tetgen .ele file")->required();
    ring->add_option("--sigma", r_sigma, "ring core radius");
    ring->add_option("--fixed-degree", r_degree, "fixed simplex rule degree (odd)");
    ring->add_option("--singular-order", r_order, "singular rule length per direction");
    ring->add_flag("--no-singular", r_nosing, "use the fixed rule on incident elements too");
    ring->add_flag("--analytic-vorticity", r_analytic,
                   "evaluate the vorticity field at quadrature points instead of interpolating");
    ring->add_option("--line-samples", r_samples, "targets on the line (1,0,z), z in [-1,1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        out.open();
        if (rule->parsed()) {
            cmd_rule(rule_kind, rule_n, rule_gamma, out);
        } else if (integrate->parsed()) {
            cmd_integrate(parse_tet(tet_str), alpha, parse_order_triple(order_str),
                          parse_ijk(ijk_str), adaptive_flag, tol, rel_tol, max_depth, out);
        } else if (oracle->parsed()) {
            cmd_oracle(parse_tet(o_tet), o_alpha, o_order, parse_ijk(o_ijk), out);
        } else if (suite->parsed()) {
            cmd_suite(parse_tet(s_tet), s_alpha, s_nmax, s_orders, out);
        } else if (converge->parsed()) {
            cmd_converge(c_case, c_values, c_alpha, c_orders, threads, out);
        } else if (adapt->parsed()) {
            cmd_adaptive(a_heights, a_tols, a_orders, a_depth, threads, out);
        } else if (ring->parsed()) {
            cmd_ring(r_node, r_ele, r_sigma, r_degree, r_order, r_nosing, r_analytic, r_samples,
                     threads, out);
        }
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
