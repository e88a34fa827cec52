#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ellgen/report.hpp"

using namespace ellgen;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<int, int> parse_torsion(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--torsion expects l,k");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

int emit(const Report& r, const std::string& out) {
    const std::string text = render(r);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot write " << out << "\n";
            return kExitInput;
        }
        f << text;
    }
    if (r.doc.contains("error")) std::cerr << "error: " << r.doc["error"]["message"].get<std::string>() << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic genera, theta structures and formal group laws in exact arithmetic"};
    app.require_subcommand(1);

    RunConfig c;
    std::string normalization = "paper", mode = "fraction", torsion = "1,0", adjoint = "none", out;
    int level = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--q-order", c.q_order, "exclusive q-order")->capture_default_str();
        sub->add_option("--x-order", c.x_order, "exclusive x-order (u-span for the sigma suite)")->capture_default_str();
        sub->add_option("--y-floor", c.y_floor, "lowest y-exponent certified by the delta-sharp checks")
            ->capture_default_str();
        sub->add_option("--degree", c.degree, "total slot degree D of formal group laws")->capture_default_str();
        sub->add_option("--level", level, "level N of the torsion point (0: none)")->capture_default_str();
        sub->add_option("--torsion", torsion, "torsion coordinates l,k")->capture_default_str();
        sub->add_option("--seed", c.seed, "seed for randomized instances")->capture_default_str();
        sub->add_option("--out", out, "output file (default stdout)");
    };

    std::string manifold_path;
    auto* genus = app.add_subcommand("genus", "genus of a manifold given by a JSON spec file");
    genus->add_option("manifold", manifold_path, "manifold spec (JSON)")->required();
    common(genus);
    genus->add_option("--normalization", normalization, "paper | bl | hoehn | lambda_unshifted")
        ->capture_default_str()
        ->check(CLI::IsMember({"paper", "bl", "hoehn", "lambda_unshifted"}));
    genus->add_option("--mode", mode, "fraction | expanded")->capture_default_str()->check(CLI::IsMember({"fraction", "expanded"}));
    genus->add_option("--y-order", c.y_order, "exclusive y-order in expanded mode")->capture_default_str();
    genus->add_option("--adjoint", adjoint, "none | exp-mult | phi-add")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "exp-mult", "phi-add"}));

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run an invariant suite; exit 0 iff every residual vanishes");
    verify->add_option("suite", suite, "theta | sigma | jacobi | chern | fgl")
        ->required()
        ->check(CLI::IsMember(verify_suites()));
    common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    const std::string command = genus->parsed() ? "genus" : "verify";
    c.command = command;
    try {
        c.normalization = normalization_from_name(normalization);
        c.mode = mode == "expanded" ? JacobiMode::expanded : JacobiMode::fraction;
        c.adjoint = adjoint_from_name(adjoint);
        if (level != 0) {
            const auto [l, k] = parse_torsion(torsion);
            c.level = TorsionPoint::make(level, l, k);
        }
        if (genus->parsed()) return emit(run_genus(c, parse_json_text(read_file(manifold_path), manifold_path)), out);
        return emit(run_verify(c, suite), out);
    } catch (const WindowUnderflow& e) {
        return emit(error_report(command, "window_underflow", e.what(), kExitWindow), out);
    } catch (const std::invalid_argument& e) {
        return emit(error_report(command, "input", e.what(), kExitInput), out);
    } catch (const nlohmann::json::exception& e) {
        return emit(error_report(command, "input", e.what(), kExitInput), out);
    } catch (const std::domain_error& e) {
        return emit(error_report(command, "input", e.what(), kExitInput), out);
    }
}
