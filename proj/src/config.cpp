#include "pa/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "pa/errors.hpp"
#include "pa/io.hpp"

namespace pa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double parse_double(std::string_view value, int line, const std::string& key) {
  double out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(line, key + ": expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

std::int64_t parse_int(std::string_view value, int line, const std::string& key) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(line, key + ": expected an integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view value, int line, const std::string& key) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(line, key + ": expected an unsigned integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view value, int line, const std::string& key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    const std::string_view item = trim(value.substr(start, comma - start));
    if (item.empty()) fail(line, key + ": empty list entry");
    out.push_back(parse_double(item, line, key));
    start = comma + 1;
    if (comma == value.size()) break;
  }
  if (out.empty()) fail(line, key + ": list must not be empty");
  return out;
}

std::vector<int> parse_int_list(std::string_view value, int line, const std::string& key) {
  std::vector<int> out;
  for (const double v : parse_double_list(value, line, key)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) fail(line, key + ": expected integers");
    out.push_back(i);
  }
  return out;
}

void check_unit_interval(double v, int line, const std::string& key) {
  if (!(v > 0.0 && v < 1.0)) fail(line, key + " must be in (0,1)");
}

void check_positive_int(std::int64_t v, int line, const std::string& key) {
  if (v < 1) fail(line, key + " must be >= 1");
}

void check_positive(double v, int line, const std::string& key) {
  if (!(v > 0.0)) fail(line, key + " must be > 0");
}

struct ApfKeyHandler {
  ApfSettings* settings;
  bool handle(const std::string& key, std::string_view value, int line) {
    if (key == "layers") {
      const auto v = parse_int(value, line, key);
      check_positive_int(v, line, key);
      settings->layers = static_cast<int>(v);
    } else if (key == "particles") {
      const auto v = parse_int(value, line, key);
      check_positive_int(v, line, key);
      settings->particles = static_cast<int>(v);
    } else if (key == "decay") {
      const double v = parse_double(value, line, key);
      check_unit_interval(v, line, key);
      settings->decay = v;
    } else {
      return false;
    }
    return true;
  }
};

}  // namespace

ExperimentPlan parse_plan(std::string_view text) {
  ExperimentPlan plan;
  bool kind_seen = false;

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (eol == text.size() && line.empty()) break;
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "quadratic" && section != "scaling" && section != "sensitivity" &&
          section != "apf1000" && section != "apf500" && section != "pa") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "missing key");
    if (value.empty()) fail(line_no, key + ": missing value");

    if (section.empty()) {
      if (key == "kind") {
        if (value == "quadratic") {
          plan.kind = PlanKind::QuadraticReuse;
        } else if (value == "scaling") {
          plan.kind = PlanKind::Scaling;
        } else if (value == "sensitivity") {
          plan.kind = PlanKind::Sensitivity;
        } else {
          fail(line_no, "kind must be one of: quadratic, scaling, sensitivity");
        }
        kind_seen = true;
      } else if (key == "replicates") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        plan.replicates = static_cast<int>(v);
      } else if (key == "seed") {
        plan.master_seed = parse_u64(value, line_no, key);
      } else {
        fail(line_no, "unknown key '" + key + "'");
      }
      continue;
    }

    if (section == "apf1000" || section == "apf500") {
      ApfKeyHandler handler{section == "apf1000" ? &plan.apf1000 : &plan.apf500};
      if (!handler.handle(key, value, line_no)) {
        fail(line_no, "unknown key '" + key + "' in [" + section + "]");
      }
      continue;
    }

    if (section == "pa") {
      if (key == "initial_samples") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        plan.pa.initial_samples = static_cast<int>(v);
      } else if (key == "layers") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        plan.pa.layers = static_cast<int>(v);
      } else if (key == "new_per_layer") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        plan.pa.new_per_layer = static_cast<int>(v);
      } else if (key == "eta") {
        const double v = parse_double(value, line_no, key);
        check_unit_interval(v, line_no, key);
        plan.pa.eta = v;
      } else if (key == "lambda") {
        const double v = parse_double(value, line_no, key);
        check_unit_interval(v, line_no, key);
        plan.pa.lambda = v;
      } else {
        fail(line_no, "unknown key '" + key + "' in [pa]");
      }
      continue;
    }

    if (section == "quadratic") {
      QuadraticReusePlan& q = plan.quadratic;
      if (key == "dim") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        q.dim = static_cast<int>(v);
      } else if (key == "start_scale") {
        q.start_scale = parse_double(value, line_no, key);
      } else if (key == "xi_scale") {
        const double v = parse_double(value, line_no, key);
        check_positive(v, line_no, key);
        q.xi_scale = v;
      } else if (key == "layers") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        q.apf.layers = static_cast<int>(v);
      } else if (key == "particles") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        q.apf.particles = static_cast<int>(v);
      } else if (key == "decay") {
        const double v = parse_double(value, line_no, key);
        check_unit_interval(v, line_no, key);
        q.apf.decay = v;
      } else if (key == "deep_eta") {
        const double v = parse_double(value, line_no, key);
        check_unit_interval(v, line_no, key);
        q.deep_eta = v;
      } else if (key == "deep_lambda") {
        const double v = parse_double(value, line_no, key);
        check_unit_interval(v, line_no, key);
        q.deep_lambda = v;
      } else {
        fail(line_no, "unknown key '" + key + "' in [quadratic]");
      }
      continue;
    }

    if (section == "scaling") {
      ScalingPlan& sc = plan.scaling;
      if (key == "d_grid") {
        sc.d_grid = parse_int_list(value, line_no, key);
        for (const int v : sc.d_grid) check_positive_int(v, line_no, key);
      } else if (key == "k_grid") {
        sc.k_grid = parse_int_list(value, line_no, key);
        for (const int v : sc.k_grid) check_positive_int(v, line_no, key);
      } else if (key == "s_grid") {
        sc.s_grid = parse_double_list(value, line_no, key);
        for (const double v : sc.s_grid) check_positive(v, line_no, key);
      } else if (key == "base_d") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        sc.base_d = static_cast<int>(v);
      } else if (key == "base_k") {
        const auto v = parse_int(value, line_no, key);
        check_positive_int(v, line_no, key);
        sc.base_k = static_cast<int>(v);
      } else if (key == "base_s") {
        const double v = parse_double(value, line_no, key);
        check_positive(v, line_no, key);
        sc.base_s = v;
      } else {
        fail(line_no, "unknown key '" + key + "' in [scaling]");
      }
      continue;
    }

    // section == "sensitivity"
    SensitivityPlan& se = plan.sensitivity;
    if (key == "d") {
      const auto v = parse_int(value, line_no, key);
      check_positive_int(v, line_no, key);
      se.objective_d = static_cast<int>(v);
    } else if (key == "k") {
      const auto v = parse_int(value, line_no, key);
      check_positive_int(v, line_no, key);
      se.objective_k = static_cast<int>(v);
    } else if (key == "s") {
      const double v = parse_double(value, line_no, key);
      check_positive(v, line_no, key);
      se.objective_s = v;
    } else if (key == "eta_sweep") {
      se.eta_sweep = parse_double_list(value, line_no, key);
      for (const double v : se.eta_sweep) check_unit_interval(v, line_no, key);
    } else if (key == "lambda_sweep") {
      se.lambda_sweep = parse_double_list(value, line_no, key);
      for (const double v : se.lambda_sweep) check_unit_interval(v, line_no, key);
    } else if (key == "n0_sweep") {
      se.n0_sweep = parse_int_list(value, line_no, key);
      for (const int v : se.n0_sweep) check_positive_int(v, line_no, key);
    } else if (key == "layers_sweep") {
      se.layers_sweep = parse_int_list(value, line_no, key);
      for (const int v : se.layers_sweep) check_positive_int(v, line_no, key);
    } else if (key == "c_sweep") {
      se.c_sweep = parse_int_list(value, line_no, key);
      for (const int v : se.c_sweep) check_positive_int(v, line_no, key);
    } else {
      fail(line_no, "unknown key '" + key + "' in [sensitivity]");
    }
  }

  if (!kind_seen) throw ConfigError("missing required key 'kind'");
  // Materialize the per-kind replicate default so nothing downstream sees an
  // implicit value.
  plan.replicates = plan.resolved_replicates();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plan(buffer.str());
}

namespace {

void write_list(std::ostream& out, const char* key, const std::vector<int>& values) {
  out << key << " = ";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << values[i];
  }
  out << "\n";
}

void write_list(std::ostream& out, const char* key, const std::vector<double>& values) {
  out << key << " = ";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << format_double(values[i]);
  }
  out << "\n";
}

void write_apf(std::ostream& out, const char* section, const ApfSettings& s) {
  out << "[" << section << "]\n";
  out << "layers = " << s.layers << "\n";
  out << "particles = " << s.particles << "\n";
  out << "decay = " << format_double(s.decay) << "\n\n";
}

}  // namespace

std::string serialize_plan(const ExperimentPlan& plan) {
  std::ostringstream out;
  out << "kind = " << plan_kind_name(plan.kind) << "\n";
  out << "replicates = " << plan.resolved_replicates() << "\n";
  out << "seed = " << plan.master_seed << "\n\n";

  const QuadraticReusePlan& q = plan.quadratic;
  out << "[quadratic]\n";
  out << "dim = " << q.dim << "\n";
  out << "start_scale = " << format_double(q.start_scale) << "\n";
  out << "xi_scale = " << format_double(q.xi_scale) << "\n";
  out << "layers = " << q.apf.layers << "\n";
  out << "particles = " << q.apf.particles << "\n";
  out << "decay = " << format_double(q.apf.decay) << "\n";
  out << "deep_eta = " << format_double(q.deep_eta) << "\n";
  out << "deep_lambda = " << format_double(q.deep_lambda) << "\n\n";

  const ScalingPlan& sc = plan.scaling;
  out << "[scaling]\n";
  write_list(out, "d_grid", sc.d_grid);
  write_list(out, "k_grid", sc.k_grid);
  write_list(out, "s_grid", sc.s_grid);
  out << "base_d = " << sc.base_d << "\n";
  out << "base_k = " << sc.base_k << "\n";
  out << "base_s = " << format_double(sc.base_s) << "\n\n";

  write_apf(out, "apf1000", plan.apf1000);
  write_apf(out, "apf500", plan.apf500);

  out << "[pa]\n";
  out << "initial_samples = " << plan.pa.initial_samples << "\n";
  out << "layers = " << plan.pa.layers << "\n";
  out << "new_per_layer = " << plan.pa.new_per_layer << "\n";
  out << "eta = " << format_double(plan.pa.eta) << "\n";
  out << "lambda = " << format_double(plan.pa.lambda) << "\n\n";

  const SensitivityPlan& se = plan.sensitivity;
  out << "[sensitivity]\n";
  out << "d = " << se.objective_d << "\n";
  out << "k = " << se.objective_k << "\n";
  out << "s = " << format_double(se.objective_s) << "\n";
  write_list(out, "eta_sweep", se.eta_sweep);
  write_list(out, "lambda_sweep", se.lambda_sweep);
  write_list(out, "n0_sweep", se.n0_sweep);
  write_list(out, "layers_sweep", se.layers_sweep);
  write_list(out, "c_sweep", se.c_sweep);
  return std::move(out).str();
}

}  // namespace pa
