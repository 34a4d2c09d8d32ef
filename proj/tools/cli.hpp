#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cvqkd::cli {

/// One fully resolved rate evaluation. Serializes to JSON and parses back
/// without loss (doubles round-trip exactly).
struct RunRecord {
    double eta = 0.0;
    double eta_db = 0.0;
    double eps = 0.0;
    double nbar = 0.0;
    double m = 1.0;
    std::optional<double> mu;  ///< empty: asymptotic limit
    std::string mode;          ///< "asymptotic" | "finite"

    double rate = 0.0;
    double i_ab = 0.0;
    double holevo = 0.0;
    double k = 1.0;
    double eta_eff = 0.0;
    double eps_eff = 0.0;
    std::optional<double> mu_eff;
    std::optional<double> plob;  ///< empty when the bound diverges

    std::string version;
    std::string timestamp;  ///< ISO-8601 UTC

    bool operator==(const RunRecord&) const = default;
};

std::string to_json_string(const RunRecord& record);
RunRecord run_record_from_json(const std::string& text);

enum class SweepScale { linear, log };

struct SweepSpec {
    std::string variable;  ///< eta | eta_db | eps | nbar | m | mu
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    SweepScale scale = SweepScale::linear;
};

/// Validates the spec and materializes the inclusive grid.
std::vector<double> sweep_grid(const SweepSpec& spec);

/// Locale-independent CSV number formatting, 15 significant digits.
std::string format_number(double value);

/// Entry point shared by the binary and the tests. Exit codes:
/// 0 success, 1 verification failure, 2 usage error, 3 domain/singularity.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvqkd::cli
