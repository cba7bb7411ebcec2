// graphonlab: densities, forcing-family verification, W-random sampling,
// spectral solves, and CR-tree tooling behind one subcommand-style binary.
//
// Exit codes: 0 success / verification pass, 1 verification or numeric
// failure, 2 usage or parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "graphonlab/acceptance.hpp"
#include "graphonlab/adjoint.hpp"
#include "graphonlab/cr.hpp"
#include "graphonlab/density.hpp"
#include "graphonlab/expr.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/spectral.hpp"
#include "graphonlab/verify.hpp"
#include "graphonlab/wrandom.hpp"

using namespace graphonlab;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

Graph load_graph(const std::string& file, const std::string& name) {
    std::ifstream in(file);
    if (!in) throw usage_error("cannot open graph file '" + file + "'");
    auto named = parse_graphs(in);
    if (named.empty()) throw usage_error("no graphs in '" + file + "'");
    if (name.empty()) return named.begin()->second;
    auto it = named.find(name);
    if (it == named.end()) throw usage_error("no graph named '" + name + "' in '" + file + "'");
    return it->second;
}

QuantumGraph load_quantum(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw usage_error("cannot open quantum file '" + file + "'");
    auto q = parse_quantum(in);
    if (q.is_zero()) throw usage_error("quantum file '" + file + "' has no term lines");
    return q;
}

OperatorDescriptor parse_operator(const std::string& desc, const Config& cfg, Graphon* tensor_fixed_a) {
    auto colon = desc.find(':');
    std::string head = desc.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : desc.substr(colon + 1);
    if (head == "scale") return ScaleOp{Scalar(Rational::parse(arg))};
    if (head == "shift") return ShiftOp{Scalar(Rational::parse(arg))};
    if (head == "tensor-power") return TensorPowerOp{std::stoi(arg)};
    if (head == "poly-kernel") {
        std::vector<Scalar> a;
        std::stringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) a.push_back(Scalar(Rational::parse(item)));
        return PolyKernelOp{a};
    }
    if (head == "tensor-fixed") {
        *tensor_fixed_a = build_graphon(arg, cfg);
        return TensorFixedOp{nullptr, arg};  // density oracle filled by the caller
    }
    if (head == "edge-substitute") {
        auto second = arg.rfind(':');
        if (second == std::string::npos) throw usage_error("edge-substitute:FILE:NAME");
        return EdgeSubstituteOp{load_graph(arg.substr(0, second), arg.substr(second + 1))};
    }
    throw usage_error("unknown operator '" + head +
                      "' (scale: shift: tensor-power: poly-kernel: tensor-fixed: edge-substitute:)");
}

std::string step_expression(const StepStructure& s) {
    std::ostringstream os;
    os.precision(17);
    os << "(step (";
    for (int i = 0; i < s.size(); ++i) os << (i ? " " : "") << s.weights[i];
    os << ") (";
    for (int i = 0; i < s.size(); ++i) {
        os << (i ? " (" : "(");
        for (int j = 0; j < s.size(); ++j) os << (j ? " " : "") << s.at(i, j);
        os << ")";
    }
    os << "))";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphonlab: homomorphism densities, forcing families, and CR graphons"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker count (default: GRAPHONLAB_THREADS or hardware)");

    Config cfg;

    // ---- density ----
    auto* density = app.add_subcommand("density", "t / t^k of (quantum) graphs in graphons");
    std::string d_graph, d_name, d_quantum, d_expr, d_method = "auto", d_labels, d_out = "text";
    std::size_t d_samples = cfg.mc_samples;
    std::uint64_t d_seed = cfg.seed;
    int d_resolution = cfg.oprod_resolution;
    density->add_option("--graph", d_graph, "graph file");
    density->add_option("--name", d_name, "graph name within the file (default: first)");
    density->add_option("--quantum", d_quantum, "quantum graph file (term lines)");
    density->add_option("--graphon", d_expr, "graphon expression")->required();
    density->add_option("--method", d_method, "auto|exact|mc|grid");
    density->add_option("--samples", d_samples, "MC samples");
    density->add_option("--seed", d_seed, "RNG seed");
    density->add_option("--resolution", d_resolution, "grid resolution");
    density->add_option("--labels", d_labels, "comma-separated label coordinates for t^k");
    density->add_option("--out", d_out, "text|csv");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "verify a forcing family");
    std::string v_family, v_expr, v_poly, v_reference, v_out = "text";
    double v_degree = 0.5;
    std::size_t v_samples = cfg.mc_samples, v_pointwise = 20000;
    std::uint64_t v_seed = cfg.seed;
    verify->add_option("--family", v_family, "regular|regular_any|zero_one|monotone|cgw|halfgraphon|monpoly|binary_tree")->required();
    verify->add_option("--graphon", v_expr, "graphon expression")->required();
    verify->add_option("--degree", v_degree, "degree for the regular family");
    verify->add_option("--poly", v_poly, "(poly (i j c)...) for monpoly");
    verify->add_option("--reference", v_reference, "reference graphon expression for monpoly");
    verify->add_option("--samples", v_samples, "MC samples per condition");
    verify->add_option("--pointwise-samples", v_pointwise, "MC samples per label tuple");
    verify->add_option("--seed", v_seed, "RNG seed");
    verify->add_option("--out", v_out, "text|csv|both");

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "draw a W-random graph");
    std::string s_expr, s_output;
    int s_n = 100;
    std::uint64_t s_seed = cfg.seed;
    double s_degree = -1, s_eps = 0.1;
    sample->add_option("--graphon", s_expr, "graphon expression")->required();
    sample->add_option("--n", s_n, "node count")->required();
    sample->add_option("--seed", s_seed, "RNG seed");
    sample->add_option("--output", s_output, "write edge list to this file");
    sample->add_option("--degree-report", s_degree, "expected degree: print concentration report");
    sample->add_option("--eps", s_eps, "degree deviation epsilon");

    // ---- spectrum ----
    auto* spectrum = app.add_subcommand("spectrum", "eigendecompose / spectral solve");
    std::string sp_expr, sp_solve, sp_out = "text";
    int sp_top = 8, sp_resolution = 0;
    spectrum->add_option("--graphon", sp_expr, "graphon expression")->required();
    spectrum->add_option("--top", sp_top, "number of eigenpairs to print");
    spectrum->add_option("--resolution", sp_resolution, "discretize at this resolution first");
    spectrum->add_option("--solve", sp_solve, "comma-separated a1..an of p(z); solves p(W)=U");
    spectrum->add_option("--out", sp_out, "text|csv");

    // ---- cr ----
    auto* cr = app.add_subcommand("cr", "CR trees: weights, cf sequences, truncations");
    bool c_binary = false;
    std::string c_cf, c_file;
    int c_terms = 0, c_depth = 0, c_truncate = 0;
    cr->add_flag("--binary", c_binary, "complete binary tree model");
    cr->add_option("--cf", c_cf, "alpha for the continued-fraction caterpillar");
    cr->add_option("--file", c_file, "tree file");
    cr->add_option("--terms", c_terms, "emit this many continued-fraction terms");
    cr->add_option("--depth", c_depth, "tree construction depth");
    cr->add_option("--truncate", c_truncate, "emit the depth-truncated stepfunction expression");

    // ---- adjoint-check ----
    auto* adjoint = app.add_subcommand("adjoint-check", "t(F, F(W)) = t(F*(F), W)");
    std::string a_op, a_graph, a_name, a_expr;
    std::size_t a_samples = 200000;
    std::uint64_t a_seed = cfg.seed;
    adjoint->add_option("--op", a_op, "scale:L shift:L tensor-power:K poly-kernel:a1,.. tensor-fixed:EXPR edge-substitute:FILE:NAME")->required();
    adjoint->add_option("--graph", a_graph, "graph file")->required();
    adjoint->add_option("--name", a_name, "graph name within the file");
    adjoint->add_option("--graphon", a_expr, "graphon expression")->required();
    adjoint->add_option("--samples", a_samples, "MC samples");
    adjoint->add_option("--seed", a_seed, "RNG seed");

    // ---- selftest ----
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    (void)selftest;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (threads > 0) set_thread_count(threads);

    try {
        if (density->parsed()) {
            QuantumGraph f;
            std::string fname;
            if (!d_quantum.empty()) {
                f = load_quantum(d_quantum);
                fname = d_quantum;
            } else if (!d_graph.empty()) {
                f = QuantumGraph(load_graph(d_graph, d_name));
                fname = d_name.empty() ? d_graph : d_name;
            } else {
                throw usage_error("density needs --graph or --quantum");
            }
            Graphon w = build_graphon(d_expr, cfg);
            DensityEstimate est;
            std::vector<double> labels = d_labels.empty() ? std::vector<double>{} : parse_double_list(d_labels);
            if (!labels.empty()) {
                est = tk_eval(f, w, labels, d_samples, d_seed, cfg);
            } else if (d_method == "exact") {
                if (!w.steps()) throw usage_error("--method exact needs a stepfunction graphon");
                est = t_exact_step(f, w, cfg);
            } else if (d_method == "mc") {
                est = t_mc(f, w, d_samples, d_seed, cfg);
            } else if (d_method == "grid") {
                est = t_grid(f, w, d_resolution, cfg);
            } else if (d_method == "auto") {
                est = w.steps() ? t_exact_step(f, w, cfg) : t_mc(f, w, d_samples, d_seed, cfg);
            } else {
                throw usage_error("unknown --method '" + d_method + "'");
            }
            if (d_out == "csv") {
                std::cout << "graph,graphon,method,value,stderr,n,seed\n"
                          << est.csv_row(fname, d_expr) << "\n";
            } else {
                std::cout << cfg.header() << "\n";
                std::cout << "t(" << fname << ", " << d_expr << ") = " << est.value;
                if (est.stderr_ > 0) std::cout << " +- " << est.stderr_ << " (stderr)";
                std::cout << "  [" << method_name(est.method) << ", n=" << est.n << ", seed=" << est.seed
                          << "]";
                if (est.excluded) std::cout << " excluded=" << est.excluded;
                std::cout << "\n";
            }
            return 0;
        }

        if (verify->parsed()) {
            FamilySpec spec;
            spec.kind = family_from_name(v_family);
            spec.degree = v_degree;
            if (!v_poly.empty()) spec.poly = detail::build_poly(parse_expression(v_poly));
            if (!v_reference.empty()) spec.reference = build_graphon(v_reference, cfg);
            if (spec.kind == Family::monpoly && !spec.poly) throw usage_error("monpoly needs --poly");
            VerifyOptions opt;
            opt.samples = v_samples;
            opt.pointwise_samples = v_pointwise;
            opt.seed = v_seed;
            opt.cfg = cfg;
            auto rep = verify_family(build_graphon(v_expr, cfg), spec, opt);
            std::cout << cfg.header() << "\n";
            if (v_out == "csv")
                std::cout << rep.csv();
            else if (v_out == "both")
                std::cout << rep.text() << rep.csv();
            else
                std::cout << rep.text();
            return rep.pass ? 0 : 1;
        }

        if (sample->parsed()) {
            Graphon w = build_graphon(s_expr, cfg);
            auto g = sample_graph(w, s_n, s_seed);
            if (!s_output.empty()) {
                std::ofstream out(s_output);
                out << g.edge_list(s_expr);
                std::cout << "wrote " << g.edge_count() << " edges to " << s_output << "\n";
            } else {
                std::cout << g.edge_list(s_expr);
            }
            if (s_degree >= 0) {
                auto rep = degree_report(g, s_degree, s_eps);
                std::cout << "# degrees: min=" << rep.min_normalized << " max=" << rep.max_normalized
                          << " max_dev=" << rep.max_deviation << " azuma_bound=" << rep.azuma_bound
                          << " within_eps=" << (rep.within_eps ? "yes" : "no") << "\n";
            }
            return 0;
        }

        if (spectrum->parsed()) {
            Graphon w = build_graphon(sp_expr, cfg);
            if (sp_resolution > 0) w = discretize(w, sp_resolution, cfg.discretize_subsample);
            if (!w.steps()) throw usage_error("spectrum needs a stepfunction (use --resolution)");
            if (!sp_solve.empty()) {
                Poly1 p(parse_double_list(sp_solve));
                auto sol = spectral_solve(w, p, cfg);
                auto forward = apply_operator_poly(sol.w, p);
                double maxdiff = 0;
                for (std::size_t i = 0; i < forward.steps()->values.size(); ++i)
                    maxdiff = std::max(maxdiff,
                                       std::abs(forward.steps()->values[i] - w.steps()->values[i]));
                auto top = eigendecompose(sol.w, 1);
                std::cout << cfg.header() << "\n";
                std::cout << "specsolve p(z)=" << p.str() << ": top_eigenvalue=" << top[0].value
                          << " forward_entrywise_diff=" << maxdiff << " truncated=" << sol.truncated
                          << " value_range=[" << sol.w.steps()->min_value() << ","
                          << sol.w.steps()->max_value() << "]\n";
                return maxdiff <= 1e-6 ? 0 : 1;
            }
            auto pairs = eigendecompose(w, sp_top);
            if (sp_out == "csv") {
                std::cout << "rank,eigenvalue\n";
                for (std::size_t i = 0; i < pairs.size(); ++i)
                    std::cout << i << "," << pairs[i].value << "\n";
            } else {
                std::cout << cfg.header() << "\n";
                for (std::size_t i = 0; i < pairs.size(); ++i)
                    std::cout << "lambda_" << i << " = " << pairs[i].value << "\n";
            }
            return 0;
        }

        if (cr->parsed()) {
            if (!c_cf.empty() && c_terms > 0) {
                auto seq = cf_sequence(Scalar(Rational::parse(c_cf)), c_terms);
                for (std::size_t i = 0; i < seq.size(); ++i) std::cout << (i ? " " : "") << seq[i];
                std::cout << "\n";
                return 0;
            }
            WeightedCRTree wt;
            if (c_binary) {
                wt = make_binary_prefix(c_depth > 0 ? c_depth : 12);
            } else if (!c_cf.empty()) {
                wt = make_cf(Scalar(Rational::parse(c_cf)), c_depth > 0 ? c_depth : 40);
            } else if (!c_file.empty()) {
                std::ifstream in(c_file);
                if (!in) throw usage_error("cannot open tree file '" + c_file + "'");
                auto tf = parse_tree(in);
                wt = tf.f.empty() ? regular_weights(tf.tree) : weights_from_f(tf.tree, tf.f);
            } else {
                throw usage_error("cr needs --binary, --cf ALPHA, or --file PATH");
            }
            if (c_truncate > 0) {
                auto g = truncate_graphon(wt, c_truncate);
                std::cout << step_expression(*g.steps()) << "\n";
                return 0;
            }
            std::cout << "# degree " << wt.degree().str() << "\n" << tree_to_text(wt);
            return 0;
        }

        if (adjoint->parsed()) {
            Graph F = load_graph(a_graph, a_name);
            Graphon w = build_graphon(a_expr, cfg);
            VerifyOptions opt;
            opt.samples = a_samples;
            opt.seed = a_seed;
            opt.cfg = cfg;
            Graphon fixed_a;
            auto op = parse_operator(a_op, cfg, &fixed_a);
            AdjointCheck check;
            if (std::holds_alternative<TensorFixedOp>(op)) {
                check = adjoint_identity_check_tensor_fixed(fixed_a, F, w, opt);
            } else {
                check = adjoint_identity_check(op, F, w, opt);
            }
            std::cout << cfg.header() << "\n";
            std::cout << operator_name(op) << ": lhs=" << check.lhs << " rhs=" << check.rhs
                      << " gap=" << check.gap << " tol=" << check.tol
                      << (check.exact_path ? " [exact]" : " [mc]") << " -> "
                      << (check.pass ? "PASS" : "FAIL") << "\n";
            return check.pass ? 0 : 1;
        }

        if (selftest->parsed()) {
            auto rs = run_acceptance(&std::cout);
            int failed = 0;
            for (const auto& r : rs) failed += !r.pass;
            std::cout << (failed ? "SELFTEST FAIL (" : "SELFTEST PASS (")
                      << rs.size() - failed << "/" << rs.size() << " criteria)\n";
            return failed ? 1 : 0;
        }
    } catch (const usage_error& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const parse_error& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
