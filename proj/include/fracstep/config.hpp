#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/harness.hpp"
#include "fracstep/solver.hpp"

namespace fracstep {

/// Parses `RE+IMi`, `RE-IMi`, `RE`, `IMi`, `i`, `-i`; throws DomainError.
Complex parse_complex(std::string_view text);

/// Formats as `RE+IMi` with shortest round-trip components.
std::string format_complex(Complex z);

enum class ProblemTag { MlfDecay, LinearComplex, NonlinearSquare, Expr };

/// Complex parameter either given directly or as modulus * e^{i pi alpha phase}.
struct ComplexParam {
    Complex value{0.0, 0.0};
    std::optional<double> modulus;
    double phase = 0.0;

    Complex resolve(double alpha) const;
};

struct ProblemConfig {
    ProblemTag tag = ProblemTag::MlfDecay;
    ComplexParam lambda;  ///< linear_complex
    ComplexParam mu;      ///< nonlinear_square
    std::string rhs_expr;
    std::string exact_expr;  ///< empty when absent
    std::optional<Complex> u0;  ///< defaults to exact(0)
};

/// A run description as read from a JSON document.
struct RunConfig {
    ProblemConfig problem;
    std::vector<double> alphas;
    std::vector<SchemeId> schemes;
    double T = 1.0;
    std::vector<std::size_t> M_list;
    bool single_M = false;  ///< grid gave `M` rather than `M_list`
    std::optional<StartMode> starting;
    NewtonConfig newton;

    ProblemSpec build_problem(double alpha) const;
    /// Explicit setting, else Exact when an exact solution is known.
    StartMode start_mode() const;
};

/// Throws ConfigError on malformed input or unknown fields.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace fracstep
