#include "starfield/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "starfield/errors.hpp"
#include "starfield/findim.hpp"
#include "starfield/io.hpp"
#include "starfield/miura.hpp"
#include "starfield/var_star.hpp"
#include "starfield/varpoisson.hpp"

namespace starfield {

namespace {

// Name of the input being parsed, for error messages.
struct Source {
    std::string name = "<argument>";
};

class FileError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path, Source& src) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot read " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    src.name = path;
    return s.str();
}

DiffPoly expr_arg(const std::string& text, const std::string& option, int max_field, Source& src) {
    src.name = option;
    DiffPoly p = parse_expression(text, max_field);
    src.name = "<argument>";
    return p;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trivector_lines(const Trivector& T) {
    std::string out;
    for (const auto& [ijk, v] : T) {
        if (!v.is_zero()) {
            out += "J[" + std::to_string(ijk[0]) + "," + std::to_string(ijk[1]) + "," + std::to_string(ijk[2])
                   + "] = " + print_expression(v) + "\n";
        }
    }
    return out;
}

bool series_zero(const HbarSeries& s) {
    for (int k = 0; k <= s.order(); ++k) {
        if (!s[k].is_zero()) {
            return false;
        }
    }
    return true;
}

struct Options {
    std::string file, file2, file3;
    std::string f, g, h;
    std::string F, G, H;
    std::string args;
    int K = 2;
};

HamiltonianOperator load_operator(const std::string& path, Source& src) {
    const OperatorFile f = parse_operator_file(read_file(path, src));
    return HamiltonianOperator(f.op, f.base_dim);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations with star-products, Poisson structures and Hamiltonian operators", "starfield"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    Options o;
    Source src;
    int status = 0;
    std::function<int()> action;

    auto bivector = [&] { return parse_bivector(read_file(o.file, src)); };
    auto fgh = [&](const Bivector& P, bool with_h) {
        std::vector<DiffPoly> v{expr_arg(o.f, "-f", P.dim(), src), expr_arg(o.g, "-g", P.dim(), src)};
        if (with_h) {
            v.push_back(expr_arg(o.h, "-h", P.dim(), src));
        }
        return v;
    };

    // finite-dimensional commands
    auto* jacobi = app.add_subcommand("jacobi", "Check the Jacobi identity of a bivector");
    jacobi->add_option("bivector", o.file, "Bivector file")->required();
    jacobi->callback([&] {
        action = [&] {
            const std::string lines = trivector_lines(jacobiator_components(bivector()));
            out << "poisson: " << (lines.empty() ? "true" : "false") << "\n" << lines;
            return lines.empty() ? 0 : 1;
        };
    });

    auto* s2 = app.add_subcommand("star2", "Order-2 star-product f * g");
    s2->add_option("bivector", o.file, "Bivector file")->required();
    s2->add_option("-f", o.f, "First factor")->required();
    s2->add_option("-g", o.g, "Second factor")->required();
    s2->callback([&] {
        action = [&] {
            const Bivector P = bivector();
            const auto v = fgh(P, false);
            out << print_series(star2(P, v[0], v[1])) << "\n";
            return 0;
        };
    });

    auto* moy = app.add_subcommand("moyal", "Moyal product of a constant bivector");
    moy->add_option("bivector", o.file, "Bivector file")->required();
    moy->add_option("-f", o.f, "First factor")->required();
    moy->add_option("-g", o.g, "Second factor")->required();
    moy->add_option("-K", o.K, "Truncation order")->required()->check(CLI::Range(0, 64));
    moy->callback([&] {
        action = [&] {
            const Bivector P = bivector();
            const auto v = fgh(P, false);
            out << print_series(moyal(P, v[0], v[1], o.K)) << "\n";
            return 0;
        };
    });

    auto* as = app.add_subcommand("assoc", "Associator (f*g)*h - f*(g*h)");
    as->set_help_flag("--help", "Print this help message and exit");
    as->add_option("bivector", o.file, "Bivector file")->required();
    as->add_option("-f", o.f, "First factor")->required();
    as->add_option("-g", o.g, "Second factor")->required();
    as->add_option("-h", o.h, "Third factor")->required();
    as->add_option("-K", o.K, "Truncation order (Moyal mode for constant bivectors)")->check(CLI::Range(0, 64));
    as->callback([&] {
        action = [&] {
            const Bivector P = bivector();
            const auto v = fgh(P, true);
            const StarProductTruncation S{P, o.K, P.is_constant() ? StarMode::constant_moyal : StarMode::general_order2};
            const HbarSeries a = associator(S, v[0], v[1], v[2]);
            const bool zero = series_zero(a);
            out << "associative: " << (zero ? "true" : "false") << "\n";
            if (!zero) {
                out << "associator: " << print_series(a) << "\n";
            }
            return zero ? 0 : 1;
        };
    });

    auto* fr = app.add_subcommand("factor-residual", "hbar^2 associator minus c times the Jacobiator");
    fr->set_help_flag("--help", "Print this help message and exit");
    fr->add_option("bivector", o.file, "Bivector file")->required();
    fr->add_option("-f", o.f, "First argument")->required();
    fr->add_option("-g", o.g, "Second argument")->required();
    fr->add_option("-h", o.h, "Third argument")->required();
    fr->callback([&] {
        action = [&] {
            const Bivector P = bivector();
            const auto v = fgh(P, true);
            const DiffPoly r = factorization_residual(P, v[0], v[1], v[2]);
            out << "c: " << to_string(factorization_constant()) << "\n";
            out << "residual: " << print_expression(r) << "\n";
            return r.is_zero() ? 0 : 1;
        };
    });

    // graphs
    auto* graph = app.add_subcommand("graph", "Kontsevich and Leibniz graphs");
    graph->require_subcommand(1);
    auto* geval = graph->add_subcommand("eval", "Evaluate a graph at a bivector");
    geval->add_option("graph", o.file2, "Graph file")->required();
    geval->add_option("bivector", o.file, "Bivector file")->required();
    geval->add_option("--args", o.args, "Comma-separated sink contents")->required();
    geval->callback([&] {
        action = [&] {
            const LeibnizGraph g = parse_graph(read_file(o.file2, src));
            const Bivector P = bivector();
            std::vector<DiffPoly> sinks;
            for (const auto& a : split_commas(o.args)) {
                sinks.push_back(expr_arg(a, "--args", P.dim(), src));
            }
            const bool leibniz = std::any_of(g.vertices.begin(), g.vertices.end(),
                                             [](const LeibnizVertex& v) { return v.is_jacobiator(); });
            const DiffPoly value = leibniz ? eval_graph_sum(expand_leibniz(g), P, sinks)
                                           : eval_graph(to_kontsevich(g), P, sinks);
            out << print_expression(value) << "\n";
            return 0;
        };
    });
    auto* gexp = graph->add_subcommand("expand-leibniz", "Expand Jacobiator vertices into Kontsevich graphs");
    gexp->add_option("graph", o.file2, "Graph file")->required();
    gexp->callback([&] {
        action = [&] {
            const SignedGraphSum sum = expand_leibniz(parse_graph(read_file(o.file2, src)));
            if (sum.empty()) {
                out << "0\n";
            }
            for (const auto& [g, c] : sum) {
                out << to_string(c) << ": " << print_graph(g) << "\n";
            }
            return 0;
        };
    });

    // variational commands
    auto* var = app.add_subcommand("var", "Variational Poisson structures on jet spaces");
    var->require_subcommand(1);
    auto functional = [&](const std::string& text, const std::string& opt, const HamiltonianOperator& A) {
        return LocalFunctional{expr_arg(text, opt, A.fields(), src)};
    };

    auto* vj = var->add_subcommand("jacobi", "Classical master-equation for a Hamiltonian operator");
    vj->add_option("operator", o.file, "Operator file")->required();
    vj->callback([&] {
        action = [&] {
            const CmeVerdict v = cme_check(load_operator(o.file, src));
            if (v.holds) {
                out << "cme: PASS" << (v.complete ? "" : " (Euler test only, no divergence witness)") << "\n";
                return 0;
            }
            out << "cme: FAIL, residual density: " << print_expression(v.residual) << "\n";
            return 1;
        };
    });

    auto* vb = var->add_subcommand("bracket", "Variational Poisson bracket {F,G}");
    vb->add_option("operator", o.file, "Operator file")->required();
    vb->add_option("-F", o.F, "First density")->required();
    vb->add_option("-G", o.G, "Second density")->required();
    vb->callback([&] {
        action = [&] {
            const HamiltonianOperator A = load_operator(o.file, src);
            const LocalFunctional b = var_bracket(A, functional(o.F, "-F", A), functional(o.G, "-G", A));
            out << "int(" << print_expression(b.density) << ")\n";
            return 0;
        };
    });

    auto* vm = var->add_subcommand("moyal", "Variational Moyal product F * G");
    vm->add_option("operator", o.file, "Operator file")->required();
    vm->add_option("-F", o.F, "First density")->required();
    vm->add_option("-G", o.G, "Second density")->required();
    vm->add_option("-K", o.K, "Truncation order")->required()->check(CLI::Range(0, 16));
    vm->callback([&] {
        action = [&] {
            const HamiltonianOperator A = load_operator(o.file, src);
            const auto r = var_moyal(A, functional(o.F, "-F", A), functional(o.G, "-G", A), o.K);
            for (std::size_t k = 0; k < r.size(); ++k) {
                out << "h^" << k << ": " << print_multilocal(r[k]) << "\n";
            }
            return 0;
        };
    });

    auto* va = var->add_subcommand("assoc", "Associator of the variational Moyal product");
    va->add_option("operator", o.file, "Operator file")->required();
    va->add_option("-F", o.F, "First density")->required();
    va->add_option("-G", o.G, "Second density")->required();
    va->add_option("-H", o.H, "Third density")->required();
    va->add_option("-K", o.K, "Truncation order")->required()->check(CLI::Range(0, 16));
    va->callback([&] {
        action = [&] {
            const HamiltonianOperator A = load_operator(o.file, src);
            const auto r = var_associator(A, functional(o.F, "-F", A), functional(o.G, "-G", A),
                                          functional(o.H, "-H", A), o.K);
            bool all = true;
            for (std::size_t k = 0; k < r.size(); ++k) {
                const MultilocalVerdict v = multilocal_zero(r[k], A.context());
                out << "h^" << k << ": ";
                if (v.equivalent_to_zero) {
                    out << (v.literally_zero ? "0" : "0 modulo total divergences")
                        << (v.complete ? "" : " (Euler test only)") << "\n";
                } else {
                    all = false;
                    out << print_multilocal(r[k]) << "\n";
                }
            }
            out << "associative: " << (all ? "true" : "false") << "\n";
            return all ? 0 : 1;
        };
    });

    // Miura
    auto* miura = app.add_subcommand("miura", "Miura substitutions");
    miura->require_subcommand(1);
    auto* mv = miura->add_subcommand("verify", "Check A = l o B o l^dagger for a substitution w = w[u]");
    mv->add_option("--A", o.file, "Target operator file")->required();
    mv->add_option("--B", o.file2, "Source operator file")->required();
    mv->add_option("--map", o.file3, "Substitution file")->required();
    mv->callback([&] {
        action = [&] {
            const HamiltonianOperator A = load_operator(o.file, src);
            const HamiltonianOperator B = load_operator(o.file2, src);
            const MiuraMap M = parse_miura_file(read_file(o.file3, src));
            const TotalDiffOp d = factorization_difference(A, B, M);
            const bool ok = d.is_zero();
            out << "factorization: " << (ok ? "true" : "false") << "\n";
            if (!ok) {
                out << print_operator(d, "difference");
            }
            return ok ? 0 : 1;
        };
    });

    auto* kdv = app.add_subcommand("kdv-suite", "Run the KdV bi-Hamiltonian checks");
    kdv->callback([&] {
        action = [&] {
            bool all = true;
            for (const auto& c : kdv_suite()) {
                out << (c.passed ? "PASS " : "FAIL ") << c.label << "\n";
                all = all && c.passed;
            }
            return all ? 0 : 1;
        };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        status = action ? action() : 2;
    } catch (const ParseError& e) {
        err << "error: " << src.name << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return 2;
    }
    return status;
}

} // namespace starfield
