#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsoris/metrics.hpp"
#include "fsoris/montecarlo.hpp"

namespace fsoris {

inline constexpr char kToolVersion[] = "1.0.0";
// Bump when the CSV/JSON row layout changes; a golden-file test pins it.
inline constexpr char kRowSchema[] = "sweep-rows-v1";

enum class Metric { op, aber, acc, asc, sop };
enum class SweepAxis { mu_d_db, n_elements, zeta, alpha_beta_preset };
enum class OutputFormat { csv, json };

// Which destination-link hop an axis = zeta sweep moves.
enum class ZetaHop { source, ris, both };

// Config rejection. Each diagnostic is "section.key: problem" so every
// offending field can be reported at once.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& diagnostics() const { return problems_; }

  private:
    std::vector<std::string> problems_;
};

// One axis point: the canonical token plus its numeric value (NaN for
// turbulence-class tokens, which are categorical).
struct AxisValue {
    std::string token;
    double numeric = 0.0;
};

// One curve: a metric swept along one axis of the destination link with
// everything else held fixed. SNR-like quantities are stored in dB and
// converted to linear scale only at evaluation time, so a serialize/parse
// round trip reproduces the struct exactly.
struct CurveSpec {
    std::string label;
    Metric metric = Metric::op;
    SweepAxis axis = SweepAxis::mu_d_db;
    ZetaHop zeta_hop = ZetaHop::both;
    std::vector<AxisValue> values;
    SecrecyScenario scenario;
    ModulationParams modulation;
    double gamma_star_db = 0.0;
    SimConfig sim;
};

struct OutputSpec {
    std::string path;  // empty = caller decides (stdout for the CLI)
    OutputFormat format = OutputFormat::csv;
};

struct SweepConfig {
    std::vector<CurveSpec> curves;  // share axis, values, sim and output
    OutputSpec output;
};

// One evaluated sweep point. Cells that are unavailable (no asymptote for
// the secrecy-capacity metric, failed row) hold NaN and render as empty CSV
// fields / JSON nulls; a nonempty error marks a failed row the run skipped.
struct SweepRow {
    AxisValue axis;
    double closed_form = 0.0;
    double asymptotic = 0.0;
    double mc_estimate = 0.0;
    double mc_std_error = 0.0;
    bool analytic_continuation = false;
    bool bivariate_unsupported = false;
    std::string error;
};

struct CurveResult {
    std::string label;
    Metric metric = Metric::op;
    SweepAxis axis = SweepAxis::mu_d_db;
    std::vector<SweepRow> rows;
};

struct RunReport {
    std::string tool_version;
    std::string schema;
    std::uint64_t seed = 0;
    std::string config_echo;  // canonical form; reparses to the same config
    std::vector<std::string> verdicts;
    std::vector<CurveResult> curves;
    bool any_row_failed() const;
};

// Key/value text with [section] headers; '#' and ';' start comments.
// Sections: run, link.d, link.e, modulation, sim, output, curve.<label>.
// Throws ConfigError listing every problem found.
SweepConfig parse_sweep_config(const std::string& text);

// Canonical form: every key explicit, sections in fixed order, axis ranges
// expanded, per-curve sections reduced to their overrides. Parsing the
// output reproduces the input config field for field.
std::string serialize_config(const SweepConfig& config);

std::vector<std::string> preset_names();
std::string preset_summary(const std::string& name);
// Full config text for a named preset; throws ConfigError on unknown names.
std::string preset_config(const std::string& name);

// Rows are dispatched concurrently and assembled in axis order; all columns
// are bit-stable for a fixed seed. Row-level failures (e.g. a turbulence
// class whose matched shape needs the analytic continuation the config did
// not enable) are recorded in the row and do not stop the run.
RunReport run_sweep(const SweepConfig& config);

std::string render_csv(const RunReport& report);
std::string render_json(const RunReport& report);
std::string render_report(const RunReport& report, OutputFormat format);

const char* metric_token(Metric metric);
const char* axis_token(SweepAxis axis);

}  // namespace fsoris
