#include "fsoris/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace fsoris {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TurbulenceClass {
    const char* name;
    double alpha;
    double beta;
};

constexpr TurbulenceClass kTurbulenceClasses[] = {
    {"strong", 3.43, 1.43},
    {"moderate", 5.52, 2.34},
    {"weak", 10.67, 4.59},
};

const TurbulenceClass* turbulence_by_name(const std::string& name) {
    for (const TurbulenceClass& t : kTurbulenceClasses)
        if (name == t.name) return &t;
    return nullptr;
}

const TurbulenceClass* turbulence_by_values(double alpha, double beta) {
    for (const TurbulenceClass& t : kTurbulenceClasses)
        if (alpha == t.alpha && beta == t.beta) return &t;
    return nullptr;
}

std::string fmt_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string fmt_int(long long v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string fmt_u64(std::uint64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double_token(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_int_token(const std::string& token, long long& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_u64_token(const std::string& token, std::uint64_t& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(value);
    if (value.find(',') != std::string::npos) {
        while (std::getline(ss, item, ',')) out.push_back(trim(item));
    } else {
        while (ss >> item) out.push_back(item);
    }
    return out;
}

// ---------------------------------------------------------------------------
// token tables

struct MetricInfo {
    Metric metric;
    const char* token;
};
constexpr MetricInfo kMetrics[] = {
    {Metric::op, "op"},     {Metric::aber, "aber"}, {Metric::acc, "acc"},
    {Metric::asc, "asc"},   {Metric::sop, "sop"},
};

struct AxisInfo {
    SweepAxis axis;
    const char* token;
};
constexpr AxisInfo kAxes[] = {
    {SweepAxis::mu_d_db, "mu_d_db"},
    {SweepAxis::n_elements, "n_elements"},
    {SweepAxis::zeta, "zeta"},
    {SweepAxis::alpha_beta_preset, "alpha_beta_preset"},
};

bool metric_from_token(const std::string& token, Metric& out) {
    for (const MetricInfo& m : kMetrics)
        if (token == m.token) {
            out = m.metric;
            return true;
        }
    return false;
}

bool axis_from_token(const std::string& token, SweepAxis& out) {
    for (const AxisInfo& a : kAxes)
        if (token == a.token) {
            out = a.axis;
            return true;
        }
    return false;
}

const char* zeta_hop_token(ZetaHop hop) {
    switch (hop) {
        case ZetaHop::source: return "source";
        case ZetaHop::ris: return "ris";
        case ZetaHop::both: return "both";
    }
    return "both";
}

bool zeta_hop_from_token(const std::string& token, ZetaHop& out) {
    for (ZetaHop h : {ZetaHop::source, ZetaHop::ris, ZetaHop::both})
        if (token == zeta_hop_token(h)) {
            out = h;
            return true;
        }
    return false;
}

const char* mode_token(SampleMode mode) {
    return mode == SampleMode::exact ? "exact" : "matched";
}

bool mode_from_token(const std::string& token, SampleMode& out) {
    if (token == "exact") {
        out = SampleMode::exact;
        return true;
    }
    if (token == "matched") {
        out = SampleMode::matched;
        return true;
    }
    return false;
}

const char* format_token(OutputFormat format) {
    return format == OutputFormat::csv ? "csv" : "json";
}

bool format_from_token(const std::string& token, OutputFormat& out) {
    if (token == "csv") {
        out = OutputFormat::csv;
        return true;
    }
    if (token == "json") {
        out = OutputFormat::json;
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// editable field bundles (dB / raw values as written in the config)

struct LinkFields {
    double alpha = 5.52;
    double beta = 2.34;
    double zeta_s = 1.0;
    double zeta_r = 1.0;
    int elements = 2;
    double mu_db = 30.0;
};

struct CurveFields {
    int detection = 1;
    double gamma_star_db = 0.0;
    double tau_s = 0.1;
    double p = 1.0;
    double q = 1.0;
    LinkFields d{};
    LinkFields e{3.43, 1.43, 1.0, 1.0, 2, 30.0};
};

LinkFields link_fields_of(const LinkParams& link) {
    LinkFields f;
    f.alpha = link.hop_s.alpha;
    f.beta = link.hop_s.beta;
    f.zeta_s = link.hop_s.zeta;
    f.zeta_r = link.hop_r.zeta;
    f.elements = link.n_elements;
    f.mu_db = link.mu_r_db;
    return f;
}

CurveFields fields_of(const CurveSpec& curve) {
    CurveFields f;
    f.detection = curve.scenario.link_d.detection;
    f.gamma_star_db = curve.gamma_star_db;
    f.tau_s = curve.scenario.tau_s;
    f.p = curve.modulation.p;
    f.q = curve.modulation.q;
    f.d = link_fields_of(curve.scenario.link_d);
    f.e = link_fields_of(curve.scenario.link_e);
    return f;
}

LinkParams build_link(const LinkFields& f, int detection) {
    LinkParams link;
    link.hop_s = make_hop(f.alpha, f.beta, f.zeta_s);
    link.hop_r = make_hop(f.alpha, f.beta, f.zeta_r);
    link.n_elements = f.elements;
    link.detection = detection;
    link.mu_r_db = f.mu_db;
    return link;
}

// ---------------------------------------------------------------------------
// raw config text -> sections

struct RawSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<RawSection> tokenize_config(const std::string& text,
                                        std::vector<std::string>& problems) {
    std::vector<RawSection> sections;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                problems.push_back("line " + fmt_int(line_no) +
                                   ": unterminated section header");
                continue;
            }
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + fmt_int(line_no) +
                               ": expected 'key = value' or '[section]'");
            continue;
        }
        if (sections.empty()) {
            problems.push_back("line " + fmt_int(line_no) +
                               ": key outside any section");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            problems.push_back("line " + fmt_int(line_no) + ": empty key");
            continue;
        }
        sections.back().entries.emplace_back(key, value);
    }
    return sections;
}

// ---------------------------------------------------------------------------
// field-level parsing

class FieldReader {
  public:
    FieldReader(std::string section, std::vector<std::string>& problems)
        : section_(std::move(section)), problems_(problems) {}

    void fail(const std::string& key, const std::string& why) {
        problems_.push_back(section_ + "." + key + ": " + why);
    }

    bool read_double(const std::string& key, const std::string& value,
                     double& out) {
        if (parse_double_token(value, out)) return true;
        fail(key, "expected a number, got '" + value + "'");
        return false;
    }

    bool read_positive(const std::string& key, const std::string& value,
                       double& out) {
        if (!read_double(key, value, out)) return false;
        if (out > 0.0) return true;
        fail(key, "must be positive");
        return false;
    }

    bool read_int(const std::string& key, const std::string& value,
                  long long min_value, long long& out) {
        if (!parse_int_token(value, out)) {
            fail(key, "expected an integer, got '" + value + "'");
            return false;
        }
        if (out >= min_value) return true;
        fail(key, "must be >= " + fmt_int(min_value));
        return false;
    }

    bool read_bool(const std::string& key, const std::string& value,
                   bool& out) {
        if (value == "true") {
            out = true;
            return true;
        }
        if (value == "false") {
            out = false;
            return true;
        }
        fail(key, "expected true or false, got '" + value + "'");
        return false;
    }

  private:
    std::string section_;
    std::vector<std::string>& problems_;
};

bool apply_link_key(FieldReader& reader, LinkFields& link,
                    const std::string& key, const std::string& value) {
    if (key == "turbulence") {
        const TurbulenceClass* t = turbulence_by_name(value);
        if (t == nullptr) {
            reader.fail(key, "unknown turbulence class '" + value +
                                 "' (strong, moderate, weak)");
            return true;
        }
        link.alpha = t->alpha;
        link.beta = t->beta;
        return true;
    }
    if (key == "alpha") {
        reader.read_positive(key, value, link.alpha);
        return true;
    }
    if (key == "beta") {
        reader.read_positive(key, value, link.beta);
        return true;
    }
    if (key == "zeta_s") {
        reader.read_positive(key, value, link.zeta_s);
        return true;
    }
    if (key == "zeta_r") {
        reader.read_positive(key, value, link.zeta_r);
        return true;
    }
    if (key == "elements") {
        long long n = 0;
        if (reader.read_int(key, value, 1, n)) link.elements = static_cast<int>(n);
        return true;
    }
    if (key == "mu_db") {
        reader.read_double(key, value, link.mu_db);
        return true;
    }
    return false;
}

// Shared by the base [run]/[modulation] sections and the per-curve override
// sections so both accept the same scenario vocabulary.
bool apply_scenario_key(FieldReader& reader, CurveFields& fields,
                        const std::string& key, const std::string& value) {
    if (key == "detection") {
        long long r = 0;
        if (reader.read_int(key, value, 1, r)) {
            if (r == 1 || r == 2)
                fields.detection = static_cast<int>(r);
            else
                reader.fail(key, "must be 1 (heterodyne) or 2 (IM/DD)");
        }
        return true;
    }
    if (key == "gamma_star_db") {
        reader.read_double(key, value, fields.gamma_star_db);
        return true;
    }
    if (key == "tau_s") {
        double tau = 0.0;
        if (reader.read_double(key, value, tau)) {
            if (tau >= 0.0)
                fields.tau_s = tau;
            else
                reader.fail(key, "must be nonnegative");
        }
        return true;
    }
    if (key == "p") {
        reader.read_positive(key, value, fields.p);
        return true;
    }
    if (key == "q") {
        reader.read_positive(key, value, fields.q);
        return true;
    }
    if (key.rfind("d.", 0) == 0)
        return apply_link_key(reader, fields.d, key.substr(2), value)
                   ? true
                   : (reader.fail(key, "unknown key"), true);
    if (key.rfind("e.", 0) == 0)
        return apply_link_key(reader, fields.e, key.substr(2), value)
                   ? true
                   : (reader.fail(key, "unknown key"), true);
    return false;
}

std::vector<AxisValue> parse_axis_values(FieldReader& reader, SweepAxis axis,
                                         const std::string& value) {
    std::vector<AxisValue> out;
    std::vector<std::string> tokens = split_list(value);

    // start:stop:step expands to an inclusive numeric grid
    if (tokens.size() == 1 &&
        std::count(tokens[0].begin(), tokens[0].end(), ':') == 2) {
        if (axis == SweepAxis::alpha_beta_preset) {
            reader.fail("values", "ranges need a numeric axis");
            return out;
        }
        const std::string& t = tokens[0];
        const std::size_t c1 = t.find(':');
        const std::size_t c2 = t.find(':', c1 + 1);
        double start = 0.0, stop = 0.0, step = 0.0;
        if (!parse_double_token(t.substr(0, c1), start) ||
            !parse_double_token(t.substr(c1 + 1, c2 - c1 - 1), stop) ||
            !parse_double_token(t.substr(c2 + 1), step)) {
            reader.fail("values", "range must be start:stop:step");
            return out;
        }
        if (!(step > 0.0) || stop < start) {
            reader.fail("values", "range needs step > 0 and stop >= start");
            return out;
        }
        const long long count =
            static_cast<long long>((stop - start) / step + 1e-9) + 1;
        tokens.clear();
        for (long long i = 0; i < count; ++i)
            tokens.push_back(fmt_double(start + static_cast<double>(i) * step));
    }

    if (tokens.empty()) {
        reader.fail("values", "axis needs at least one value");
        return out;
    }

    for (const std::string& token : tokens) {
        AxisValue v;
        if (axis == SweepAxis::alpha_beta_preset) {
            const TurbulenceClass* t = turbulence_by_name(token);
            if (t == nullptr) {
                reader.fail("values", "unknown turbulence class '" + token +
                                          "' (strong, moderate, weak)");
                continue;
            }
            v.token = t->name;
            v.numeric = kNaN;
        } else {
            if (!parse_double_token(token, v.numeric)) {
                reader.fail("values", "expected a number, got '" + token + "'");
                continue;
            }
            if (axis == SweepAxis::n_elements) {
                if (v.numeric < 1.0 || v.numeric != std::floor(v.numeric)) {
                    reader.fail("values", "element counts must be integers >= 1");
                    continue;
                }
                v.token = fmt_int(static_cast<long long>(v.numeric));
            } else {
                if (axis == SweepAxis::zeta && !(v.numeric > 0.0)) {
                    reader.fail("values", "zeta values must be positive");
                    continue;
                }
                v.token = fmt_double(v.numeric);
            }
        }
        out.push_back(std::move(v));
    }

    if (axis == SweepAxis::alpha_beta_preset) {
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (out[i].token == out[j].token) {
                    reader.fail("values", "duplicate turbulence class '" +
                                              out[i].token + "'");
                    return out;
                }
    } else {
        for (std::size_t i = 1; i < out.size(); ++i)
            if (!(out[i - 1].numeric < out[i].numeric)) {
                reader.fail("values", "must be strictly increasing");
                break;
            }
    }
    return out;
}

bool valid_label(const std::string& label) {
    if (label.empty()) return false;
    for (char c : label)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
              c == '-' || c == '+' || c == '.'))
            return false;
    return true;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(problems.empty()
                             ? std::string("invalid config")
                             : "invalid config: " + problems.front() +
                                   (problems.size() > 1
                                        ? " (+" + fmt_int(static_cast<long long>(
                                                      problems.size() - 1)) +
                                              " more)"
                                        : "")),
      problems_(std::move(problems)) {}

const char* metric_token(Metric metric) {
    for (const MetricInfo& m : kMetrics)
        if (m.metric == metric) return m.token;
    return "op";
}

const char* axis_token(SweepAxis axis) {
    for (const AxisInfo& a : kAxes)
        if (a.axis == axis) return a.token;
    return "mu_d_db";
}

bool RunReport::any_row_failed() const {
    for (const CurveResult& curve : curves)
        for (const SweepRow& row : curve.rows)
            if (!row.error.empty()) return true;
    return false;
}

SweepConfig parse_sweep_config(const std::string& text) {
    std::vector<std::string> problems;
    std::vector<RawSection> sections = tokenize_config(text, problems);

    Metric metric = Metric::op;
    SweepAxis axis = SweepAxis::mu_d_db;
    ZetaHop zeta_hop = ZetaHop::both;
    bool metric_seen = false;
    bool axis_seen = false;
    std::string values_text;
    bool values_seen = false;

    CurveFields base;
    SimConfig sim;
    OutputSpec output;
    std::vector<std::pair<std::string, RawSection>> curve_sections;

    std::vector<std::string> seen_sections;
    for (RawSection& section : sections) {
        const std::string& name = section.name;
        const bool is_curve = name.rfind("curve.", 0) == 0;
        if (!is_curve) {
            if (std::find(seen_sections.begin(), seen_sections.end(), name) !=
                seen_sections.end()) {
                problems.push_back(name + ": duplicate section");
                continue;
            }
            seen_sections.push_back(name);
        }

        FieldReader reader(name, problems);
        if (name == "run") {
            for (auto& [key, value] : section.entries) {
                if (key == "metric") {
                    metric_seen = metric_from_token(value, metric);
                    if (!metric_seen)
                        reader.fail(key, "unknown metric '" + value +
                                             "' (op, aber, acc, asc, sop)");
                } else if (key == "axis") {
                    axis_seen = axis_from_token(value, axis);
                    if (!axis_seen)
                        reader.fail(key,
                                    "unknown axis '" + value +
                                        "' (mu_d_db, n_elements, zeta, "
                                        "alpha_beta_preset)");
                } else if (key == "values") {
                    values_text = value;
                    values_seen = true;
                } else if (key == "zeta_hop") {
                    if (!zeta_hop_from_token(value, zeta_hop))
                        reader.fail(key, "expected source, ris or both");
                } else if (!apply_scenario_key(reader, base, key, value)) {
                    reader.fail(key, "unknown key");
                }
            }
        } else if (name == "link.d" || name == "link.e") {
            LinkFields& link = name == "link.d" ? base.d : base.e;
            for (auto& [key, value] : section.entries)
                if (!apply_link_key(reader, link, key, value))
                    reader.fail(key, "unknown key");
        } else if (name == "modulation") {
            for (auto& [key, value] : section.entries) {
                if (key == "p")
                    reader.read_positive(key, value, base.p);
                else if (key == "q")
                    reader.read_positive(key, value, base.q);
                else
                    reader.fail(key, "unknown key");
            }
        } else if (name == "sim") {
            for (auto& [key, value] : section.entries) {
                if (key == "samples") {
                    long long n = 0;
                    if (reader.read_int(key, value, 1, n))
                        sim.n_samples = static_cast<std::uint64_t>(n);
                } else if (key == "seed") {
                    std::uint64_t s = 0;
                    if (parse_u64_token(value, s))
                        sim.seed = s;
                    else
                        reader.fail(key, "expected an unsigned integer");
                } else if (key == "mode") {
                    if (!mode_from_token(value, sim.mode))
                        reader.fail(key, "expected exact or matched");
                } else if (key == "batch") {
                    long long b = 0;
                    if (reader.read_int(key, value, 1, b))
                        sim.batch_size = static_cast<std::uint64_t>(b);
                } else if (key == "continuation") {
                    reader.read_bool(key, value, sim.allow_analytic_continuation);
                } else {
                    reader.fail(key, "unknown key");
                }
            }
        } else if (name == "output") {
            for (auto& [key, value] : section.entries) {
                if (key == "path")
                    output.path = value;
                else if (key == "format") {
                    if (!format_from_token(value, output.format))
                        reader.fail(key, "expected csv or json");
                } else {
                    reader.fail(key, "unknown key");
                }
            }
        } else if (is_curve) {
            const std::string label = name.substr(6);
            if (!valid_label(label)) {
                problems.push_back(name + ": label must be nonempty [A-Za-z0-9_.+-]");
                continue;
            }
            if (std::any_of(curve_sections.begin(), curve_sections.end(),
                            [&](const auto& c) { return c.first == label; }))
                problems.push_back(name + ": duplicate curve label");
            curve_sections.emplace_back(label, std::move(section));
        } else {
            problems.push_back(name + ": unknown section");
        }
    }

    if (!metric_seen) problems.push_back("run.metric: required");
    if (!axis_seen) problems.push_back("run.axis: required");
    if (!values_seen) problems.push_back("run.values: required");

    std::vector<AxisValue> values;
    if (axis_seen && values_seen) {
        FieldReader reader("run", problems);
        values = parse_axis_values(reader, axis, values_text);
    }

    if (!problems.empty()) throw ConfigError(std::move(problems));

    // materialize curves: base fields plus per-curve overrides
    std::vector<std::pair<std::string, CurveFields>> curve_fields;
    if (curve_sections.empty()) {
        curve_fields.emplace_back(metric_token(metric), base);
    } else {
        for (auto& [label, section] : curve_sections) {
            CurveFields fields = base;
            FieldReader reader("curve." + label, problems);
            for (auto& [key, value] : section.entries)
                if (!apply_scenario_key(reader, fields, key, value))
                    reader.fail(key, "unknown key");
            curve_fields.emplace_back(label, fields);
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));

    SweepConfig config;
    config.output = output;
    for (auto& [label, fields] : curve_fields) {
        CurveSpec curve;
        curve.label = label;
        curve.metric = metric;
        curve.axis = axis;
        curve.zeta_hop = zeta_hop;
        curve.values = values;
        curve.gamma_star_db = fields.gamma_star_db;
        curve.modulation = {fields.p, fields.q};
        curve.sim = sim;
        try {
            curve.scenario =
                make_scenario(build_link(fields.d, fields.detection),
                              build_link(fields.e, fields.detection),
                              fields.tau_s);
        } catch (const std::exception& err) {
            problems.push_back("curve." + label + ": " + err.what());
            continue;
        }
        config.curves.push_back(std::move(curve));
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return config;
}

namespace {

void emit_link(std::ostream& os, const LinkFields& f) {
    const TurbulenceClass* t = turbulence_by_values(f.alpha, f.beta);
    if (t != nullptr) {
        os << "turbulence = " << t->name << "\n";
    } else {
        os << "alpha = " << fmt_double(f.alpha) << "\n";
        os << "beta = " << fmt_double(f.beta) << "\n";
    }
    os << "zeta_s = " << fmt_double(f.zeta_s) << "\n";
    os << "zeta_r = " << fmt_double(f.zeta_r) << "\n";
    os << "elements = " << fmt_int(f.elements) << "\n";
    os << "mu_db = " << fmt_double(f.mu_db) << "\n";
}

void emit_link_diff(std::ostream& os, const std::string& prefix,
                    const LinkFields& base, const LinkFields& f) {
    if (f.alpha != base.alpha || f.beta != base.beta) {
        const TurbulenceClass* t = turbulence_by_values(f.alpha, f.beta);
        if (t != nullptr) {
            os << prefix << ".turbulence = " << t->name << "\n";
        } else {
            os << prefix << ".alpha = " << fmt_double(f.alpha) << "\n";
            os << prefix << ".beta = " << fmt_double(f.beta) << "\n";
        }
    }
    if (f.zeta_s != base.zeta_s)
        os << prefix << ".zeta_s = " << fmt_double(f.zeta_s) << "\n";
    if (f.zeta_r != base.zeta_r)
        os << prefix << ".zeta_r = " << fmt_double(f.zeta_r) << "\n";
    if (f.elements != base.elements)
        os << prefix << ".elements = " << fmt_int(f.elements) << "\n";
    if (f.mu_db != base.mu_db)
        os << prefix << ".mu_db = " << fmt_double(f.mu_db) << "\n";
}

}  // namespace

std::string serialize_config(const SweepConfig& config) {
    if (config.curves.empty())
        throw ConfigError({"config: no curves to serialize"});
    const CurveSpec& first = config.curves.front();
    const CurveFields base = fields_of(first);

    std::ostringstream os;
    os << "[run]\n";
    os << "metric = " << metric_token(first.metric) << "\n";
    os << "axis = " << axis_token(first.axis) << "\n";
    os << "zeta_hop = " << zeta_hop_token(first.zeta_hop) << "\n";
    os << "values = ";
    for (std::size_t i = 0; i < first.values.size(); ++i)
        os << (i == 0 ? "" : ", ") << first.values[i].token;
    os << "\n";
    os << "detection = " << fmt_int(base.detection) << "\n";
    os << "gamma_star_db = " << fmt_double(base.gamma_star_db) << "\n";
    os << "tau_s = " << fmt_double(base.tau_s) << "\n";

    os << "\n[link.d]\n";
    emit_link(os, base.d);
    os << "\n[link.e]\n";
    emit_link(os, base.e);

    os << "\n[modulation]\n";
    os << "p = " << fmt_double(base.p) << "\n";
    os << "q = " << fmt_double(base.q) << "\n";

    os << "\n[sim]\n";
    os << "samples = " << fmt_u64(first.sim.n_samples) << "\n";
    os << "seed = " << fmt_u64(first.sim.seed) << "\n";
    os << "mode = " << mode_token(first.sim.mode) << "\n";
    os << "batch = " << fmt_u64(first.sim.batch_size) << "\n";
    os << "continuation = "
       << (first.sim.allow_analytic_continuation ? "true" : "false") << "\n";

    os << "\n[output]\n";
    os << "path = " << config.output.path << "\n";
    os << "format = " << format_token(config.output.format) << "\n";

    const bool single_default = config.curves.size() == 1 &&
                                first.label == metric_token(first.metric);
    if (!single_default) {
        for (const CurveSpec& curve : config.curves) {
            const CurveFields f = fields_of(curve);
            os << "\n[curve." << curve.label << "]\n";
            if (f.detection != base.detection)
                os << "detection = " << fmt_int(f.detection) << "\n";
            if (f.gamma_star_db != base.gamma_star_db)
                os << "gamma_star_db = " << fmt_double(f.gamma_star_db) << "\n";
            if (f.tau_s != base.tau_s)
                os << "tau_s = " << fmt_double(f.tau_s) << "\n";
            if (f.p != base.p) os << "p = " << fmt_double(f.p) << "\n";
            if (f.q != base.q) os << "q = " << fmt_double(f.q) << "\n";
            emit_link_diff(os, "d", base.d, f.d);
            emit_link_diff(os, "e", base.e, f.e);
        }
    }
    return os.str();
}

namespace {

SweepRow evaluate_row(const CurveSpec& curve, const AxisValue& value) {
    SweepRow row;
    row.axis = value;
    row.closed_form = kNaN;
    row.asymptotic = kNaN;
    row.mc_estimate = kNaN;
    row.mc_std_error = kNaN;
    try {
        LinkParams link_d = curve.scenario.link_d;
        switch (curve.axis) {
            case SweepAxis::mu_d_db:
                link_d.mu_r_db = value.numeric;
                break;
            case SweepAxis::n_elements:
                link_d.n_elements = static_cast<int>(value.numeric);
                break;
            case SweepAxis::zeta:
                if (curve.zeta_hop != ZetaHop::ris)
                    link_d.hop_s.zeta = value.numeric;
                if (curve.zeta_hop != ZetaHop::source)
                    link_d.hop_r.zeta = value.numeric;
                break;
            case SweepAxis::alpha_beta_preset: {
                const TurbulenceClass* t = turbulence_by_name(value.token);
                if (t == nullptr)
                    throw std::invalid_argument("unknown turbulence class '" +
                                                value.token + "'");
                link_d.hop_s =
                    make_hop(t->alpha, t->beta, link_d.hop_s.zeta,
                             link_d.hop_s.pointing_loss_A);
                link_d.hop_r =
                    make_hop(t->alpha, t->beta, link_d.hop_r.zeta,
                             link_d.hop_r.pointing_loss_A);
                break;
            }
        }
        link_d.validate();

        MetricOptions opts;
        opts.with_asymptotic = true;
        opts.allow_analytic_continuation =
            curve.sim.allow_analytic_continuation;

        MetricResult res;
        EstimateWithError est;
        switch (curve.metric) {
            case Metric::op: {
                const double gamma_star =
                    std::pow(10.0, curve.gamma_star_db / 10.0);
                res = outage_probability(link_d, gamma_star, opts);
                est = estimate_op(link_d, gamma_star, curve.sim);
                break;
            }
            case Metric::aber:
                res = average_ber(link_d, curve.modulation, opts);
                est = estimate_aber(link_d, curve.modulation, curve.sim);
                break;
            case Metric::acc:
                res = average_capacity(link_d, opts);
                est = estimate_acc(link_d, curve.sim);
                break;
            case Metric::asc: {
                const SecrecyScenario sc = make_scenario(
                    link_d, curve.scenario.link_e, curve.scenario.tau_s);
                res = average_secrecy_capacity(sc, opts);
                est = estimate_asc(sc, curve.sim);
                break;
            }
            case Metric::sop: {
                const SecrecyScenario sc = make_scenario(
                    link_d, curve.scenario.link_e, curve.scenario.tau_s);
                res = secrecy_outage_probability(sc, opts);
                est = estimate_sop(sc, curve.sim);
                break;
            }
        }
        row.closed_form = res.closed_form;
        if (res.asymptotic) row.asymptotic = *res.asymptotic;
        row.mc_estimate = est.estimate;
        row.mc_std_error = est.std_error;
        row.analytic_continuation = res.analytic_continuation;
        row.bivariate_unsupported = res.bivariate_unsupported;
    } catch (const std::exception& err) {
        row.error = err.what();
    }
    return row;
}

}  // namespace

RunReport run_sweep(const SweepConfig& config) {
    RunReport report;
    report.tool_version = kToolVersion;
    report.schema = kRowSchema;
    report.seed = config.curves.empty() ? 0 : config.curves.front().sim.seed;
    report.config_echo = serialize_config(config);

    report.curves.resize(config.curves.size());
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t c = 0; c < config.curves.size(); ++c) {
        report.curves[c].label = config.curves[c].label;
        report.curves[c].metric = config.curves[c].metric;
        report.curves[c].axis = config.curves[c].axis;
        report.curves[c].rows.resize(config.curves[c].values.size());
        for (std::size_t r = 0; r < config.curves[c].values.size(); ++r)
            tasks.emplace_back(c, r);
    }

    // rows land in their preassigned slots, so the axis order of the report
    // does not depend on scheduling
    const long long n_tasks = static_cast<long long>(tasks.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < n_tasks; ++i) {
        const auto [c, r] = tasks[static_cast<std::size_t>(i)];
        report.curves[c].rows[r] =
            evaluate_row(config.curves[c], config.curves[c].values[r]);
    }

    report.verdicts.push_back("config: valid");
    for (const CurveResult& curve : report.curves) {
        std::size_t failed = 0;
        for (const SweepRow& row : curve.rows)
            if (!row.error.empty()) ++failed;
        std::string verdict = "curve " + curve.label + ": " +
                              fmt_u64(curve.rows.size() - failed) + "/" +
                              fmt_u64(curve.rows.size()) + " points evaluated";
        if (failed > 0) verdict += ", " + fmt_u64(failed) + " failed";
        report.verdicts.push_back(std::move(verdict));
    }
    return report;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(double v) { return std::isfinite(v) ? fmt_double(v) : ""; }

std::string row_flags(const SweepRow& row) {
    std::string flags;
    if (row.analytic_continuation) flags = "analytic-continuation";
    if (row.bivariate_unsupported) {
        if (!flags.empty()) flags += ';';
        flags += "bivariate-unsupported";
    }
    return flags;
}

}  // namespace

std::string render_csv(const RunReport& report) {
    std::ostringstream os;
    os << "# fsoris sweep rows, schema " << report.schema << ", tool "
       << report.tool_version << "\n";
    os << "# seed " << fmt_u64(report.seed) << "\n";
    os << "curve,metric,axis,axis_value,closed_form,asymptotic,mc_estimate,"
          "mc_std_error,flags,error\n";
    for (const CurveResult& curve : report.curves) {
        for (const SweepRow& row : curve.rows) {
            os << csv_escape(curve.label) << ',' << metric_token(curve.metric)
               << ',' << axis_token(curve.axis) << ',' << row.axis.token << ','
               << csv_cell(row.closed_form) << ',' << csv_cell(row.asymptotic)
               << ',' << csv_cell(row.mc_estimate) << ','
               << csv_cell(row.mc_std_error) << ',' << row_flags(row) << ','
               << csv_escape(row.error) << "\n";
        }
    }
    return os.str();
}

std::string render_json(const RunReport& report) {
    nlohmann::ordered_json doc;
    doc["tool_version"] = report.tool_version;
    doc["schema"] = report.schema;
    doc["seed"] = report.seed;
    doc["config"] = report.config_echo;
    doc["verdicts"] = report.verdicts;
    doc["curves"] = nlohmann::ordered_json::array();
    for (const CurveResult& curve : report.curves) {
        nlohmann::ordered_json jc;
        jc["label"] = curve.label;
        jc["metric"] = metric_token(curve.metric);
        jc["axis"] = axis_token(curve.axis);
        jc["rows"] = nlohmann::ordered_json::array();
        for (const SweepRow& row : curve.rows) {
            nlohmann::ordered_json jr;
            jr["axis_token"] = row.axis.token;
            if (std::isfinite(row.axis.numeric))
                jr["axis_value"] = row.axis.numeric;
            else
                jr["axis_value"] = nullptr;
            jr["closed_form"] = row.closed_form;
            jr["asymptotic"] = row.asymptotic;
            jr["mc_estimate"] = row.mc_estimate;
            jr["mc_std_error"] = row.mc_std_error;
            nlohmann::ordered_json flags = nlohmann::ordered_json::array();
            if (row.analytic_continuation) flags.push_back("analytic-continuation");
            if (row.bivariate_unsupported) flags.push_back("bivariate-unsupported");
            jr["flags"] = std::move(flags);
            if (row.error.empty())
                jr["error"] = nullptr;
            else
                jr["error"] = row.error;
            jc["rows"].push_back(std::move(jr));
        }
        doc["curves"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

std::string render_report(const RunReport& report, OutputFormat format) {
    return format == OutputFormat::csv ? render_csv(report)
                                       : render_json(report);
}

// ---------------------------------------------------------------------------
// named presets: the baseline wiretap setup (two elements per link, all
// jitters at 1, moderate destination / strong eavesdropper turbulence,
// eavesdropper SNR 30 dB, secrecy rate 0.1) swept along the destination SNR

namespace {

constexpr char kPresetCommon[] =
    "detection = 1\n"
    "gamma_star_db = 0\n"
    "tau_s = 0.1\n"
    "\n"
    "[link.d]\n"
    "turbulence = moderate\n"
    "zeta_s = 1\n"
    "zeta_r = 1\n"
    "elements = 2\n"
    "mu_db = 30\n"
    "\n"
    "[link.e]\n"
    "turbulence = strong\n"
    "zeta_s = 1\n"
    "zeta_r = 1\n"
    "elements = 2\n"
    "mu_db = 30\n"
    "\n"
    "[modulation]\n"
    "p = 1\n"
    "q = 1\n";

struct PresetDef {
    const char* name;
    const char* summary;
    const char* metric;
    const char* values;
    bool continuation;
    const char* curves;
};

constexpr PresetDef kPresets[] = {
    {"fig2",
     "outage probability vs destination SNR; reflecting-element family",
     "op", "0:40:2", false,
     "[curve.n1]\nd.elements = 1\n\n"
     "[curve.n2]\nd.elements = 2\n\n"
     "[curve.n3]\nd.elements = 3\n"},
    {"fig3",
     "average bit error rate vs destination SNR; turbulence class and "
     "source-jitter family",
     "aber", "0:40:2", true,
     "[curve.strong]\nd.turbulence = strong\n\n"
     "[curve.moderate]\n\n"
     "[curve.weak]\nd.turbulence = weak\n\n"
     "[curve.zs-low]\nd.zeta_s = 0.8\n\n"
     "[curve.zs-high]\nd.zeta_s = 3\n"},
    {"fig4",
     "average secrecy capacity vs destination SNR; turbulence class and "
     "source-jitter family",
     "asc", "0:40:2", true,
     "[curve.strong]\nd.turbulence = strong\n\n"
     "[curve.moderate]\n\n"
     "[curve.weak]\nd.turbulence = weak\n\n"
     "[curve.zs-low]\nd.zeta_s = 0.8\n\n"
     "[curve.zs-high]\nd.zeta_s = 3\n"},
    {"fig5",
     "average capacity vs destination SNR from 20 dB up; detection order and "
     "RIS-jitter family (heterodyne leads IM/DD on this range)",
     "acc", "20:40:2", false,
     "[curve.hd-z1]\n\n"
     "[curve.imdd-z1]\ndetection = 2\n\n"
     "[curve.hd-z3]\nd.zeta_r = 3\n\n"
     "[curve.imdd-z3]\ndetection = 2\nd.zeta_r = 3\n"},
    {"fig6",
     "secrecy outage vs destination SNR; eavesdropper turbulence and jitter "
     "family",
     "sop", "0:40:2", true,
     "[curve.e-strong]\n\n"
     "[curve.e-moderate]\ne.turbulence = moderate\n\n"
     "[curve.e-weak]\ne.turbulence = weak\n\n"
     "[curve.e-zr-low]\ne.zeta_r = 0.8\n\n"
     "[curve.e-zr-high]\ne.zeta_r = 3\n"},
    {"fig7",
     "secrecy outage vs destination SNR; RIS-jitter and eavesdropper-SNR "
     "family",
     "sop", "0:40:2", true,
     "[curve.zr-low]\nd.zeta_r = 0.8\n\n"
     "[curve.zr-mid]\n\n"
     "[curve.zr-high]\nd.zeta_r = 3\n\n"
     "[curve.mue-20]\ne.mu_db = 20\n\n"
     "[curve.mue-40]\ne.mu_db = 40\n"},
    {"fig8",
     "secrecy outage vs destination SNR; destination turbulence and "
     "source-jitter family",
     "sop", "0:40:2", true,
     "[curve.d-strong]\nd.turbulence = strong\n\n"
     "[curve.d-moderate]\n\n"
     "[curve.d-weak]\nd.turbulence = weak\n\n"
     "[curve.zs-low]\nd.zeta_s = 0.8\n\n"
     "[curve.zs-high]\nd.zeta_s = 3\n"},
};

std::string build_preset(const PresetDef& def) {
    std::string text = "# ";
    text += def.summary;
    text += "\n[run]\nmetric = ";
    text += def.metric;
    text += "\naxis = mu_d_db\nvalues = ";
    text += def.values;
    text += "\n";
    text += kPresetCommon;
    text += "\n[sim]\nsamples = 1000000\nseed = 42\nmode = matched\n"
            "batch = 10000\ncontinuation = ";
    text += def.continuation ? "true" : "false";
    text += "\n\n[output]\npath = ";
    text += def.name;
    text += ".csv\nformat = csv\n\n";
    text += def.curves;
    return text;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const PresetDef& def : kPresets) names.push_back(def.name);
    return names;
}

std::string preset_summary(const std::string& name) {
    for (const PresetDef& def : kPresets)
        if (name == def.name) return def.summary;
    throw ConfigError({"preset: unknown name '" + name + "'"});
}

std::string preset_config(const std::string& name) {
    for (const PresetDef& def : kPresets)
        if (name == def.name) return build_preset(def);
    throw ConfigError({"preset: unknown name '" + name + "'"});
}

}  // namespace fsoris
