#pragma once

#include <cstdint>

#include "ellgen/genus.hpp"

namespace ellgen {

inline constexpr const char* kVersion = "ellgen 1.0.0";

enum class AdjointKind { none, exp_mult, phi_add };
std::string adjoint_name(AdjointKind k);
AdjointKind adjoint_from_name(const std::string& s);

struct RunConfig {
    std::string command;
    int q_order = 3;
    int x_order = 6;
    int y_floor = -6;
    int degree = 6;
    Normalization normalization = Normalization::paper;
    std::optional<TorsionPoint> level;
    JacobiMode mode = JacobiMode::fraction;
    long y_order = 8;
    std::uint64_t seed = 1;
    AdjointKind adjoint = AdjointKind::none;

    // throws std::invalid_argument
    void validate() const;
};

nlohmann::json config_to_json(const RunConfig& c);

struct Report {
    nlohmann::json doc;
    int exit_code = 0;
};

// exit codes
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitWindow = 3;

Report run_genus(const RunConfig& c, const nlohmann::json& manifold_spec);

// suite: theta | sigma | jacobi | chern | fgl
Report run_verify(const RunConfig& c, const std::string& suite);
const std::vector<std::string>& verify_suites();

// {"command", "version", "error": {"kind", "message"}}
Report error_report(const std::string& command, const std::string& kind, const std::string& message, int code);

// parses JSON text; parse errors become std::invalid_argument with line and column
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

// one JSON document, two-space indent, trailing newline
std::string render(const Report& r);

}  // namespace ellgen
