#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace cli {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& obj, std::string context) : obj_(obj), context_(std::move(context)) {
    if (!obj_.is_object()) throw ValidationError(context_ + " must be a JSON object");
  }

  bool has(const char* key) {
    if (!obj_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }

  const json& at(const char* key) { return obj_.at(key); }

  std::string where(const char* key) const { return context_.empty() ? key : context_ + "." + key; }

  void get(const char* key, double& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number()) throw ValidationError(where(key) + " must be a number");
    out = v.get<double>();
  }

  void get(const char* key, int& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ValidationError(where(key) + " must be an integer");
    const auto x = v.get<std::int64_t>();
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT32_MAX) throw ValidationError(where(key) + " is too large");
    if (x < INT32_MIN || x > INT32_MAX) throw ValidationError(where(key) + " is out of range");
    out = static_cast<int>(x);
  }

  void get(const char* key, std::uint64_t& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (v.is_number_unsigned()) {
      out = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else {
      throw ValidationError(where(key) + " must be a non-negative integer");
    }
  }

  void get(const char* key, bool& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_boolean()) throw ValidationError(where(key) + " must be true or false");
    out = v.get<bool>();
  }

  void get(const char* key, std::string& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_string()) throw ValidationError(where(key) + " must be a string");
    out = v.get<std::string>();
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    if (!has(key)) return;
    if (at(key).is_null()) {
      out.reset();
      return;
    }
    T value{};
    get_value(key, value);
    out = std::move(value);
  }

  void get(const char* key, std::vector<double>& out) { get_list(key, out); }
  void get(const char* key, std::vector<int>& out) { get_list(key, out); }

  void finish() const {
    for (const auto& [key, _] : obj_.items())
      if (!seen_.count(key)) throw ValidationError("unknown config key: " + (context_.empty() ? key : context_ + "." + key));
  }

 private:
  void get_value(const char* key, double& v) { get(key, v); }
  void get_value(const char* key, std::vector<double>& v) { get_list(key, v); }
  void get_value(const char* key, std::vector<int>& v) { get_list(key, v); }

  template <class T>
  void get_list(const char* key, std::vector<T>& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_array()) throw ValidationError(where(key) + " must be an array");
    std::vector<T> values;
    for (const auto& item : v) {
      if constexpr (std::is_same_v<T, int>) {
        if (!item.is_number_integer()) throw ValidationError(where(key) + " must contain integers");
        values.push_back(item.get<int>());
      } else {
        if (!item.is_number()) throw ValidationError(where(key) + " must contain numbers");
        values.push_back(item.get<double>());
      }
    }
    out = std::move(values);
  }

  const json& obj_;
  std::string context_;
  std::set<std::string> seen_;
};

void load_grid(Reader& r, const char* key, GridSpec& grid) {
  if (!r.has(key)) return;
  const auto& v = r.at(key);
  if (v.is_array()) {
    GridSpec out;
    for (const auto& item : v) {
      if (!item.is_number()) throw ValidationError(r.where(key) + " must contain numbers");
      out.values.push_back(item.get<double>());
    }
    if (out.values.empty()) throw ValidationError(r.where(key) + " must not be empty");
    grid = out;
    return;
  }
  const std::string context = r.where(key);
  Reader g(v, context);
  GridSpec out;
  double start = grid.start.value_or(0.0), stop = grid.stop.value_or(1.0), step = grid.step.value_or(0.01);
  g.get("start", start);
  g.get("stop", stop);
  g.get("step", step);
  g.finish();
  out.start = start;
  out.stop = stop;
  out.step = step;
  grid = out;
}

void load_experiment(Reader& r, ExperimentSettings& e) {
  r.get("visibility", e.visibility);
  r.get("photon_overlaps", e.photon_overlaps);
  r.get("transmission", e.transmission);
  r.get("ancilla", e.ancilla);
  r.get("phase", e.phase);
  r.get("classification", e.classification);
  if (r.has("detector")) {
    Reader d(r.at("detector"), r.where("detector"));
    d.get("fan_out", e.detector.fan_out);
    d.get("efficiency", e.detector.efficiency);
    d.finish();
  }
}

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void validate_unit(double x, const std::string& name) {
  require(finite(x) && x >= 0.0 && x <= 1.0, name + " must be in [0, 1]");
}

void validate_experiment(const ExperimentSettings& e) {
  validate_unit(e.visibility, "visibility");
  if (e.photon_overlaps) {
    require(e.photon_overlaps->size() == 8, "photon_overlaps needs exactly 8 values");
    for (double v : *e.photon_overlaps) validate_unit(v, "photon_overlaps entries");
  }
  validate_unit(e.transmission, "transmission");
  require(finite(e.phase), "phase must be finite");
  require(e.classification == "photon-number" || e.classification == "raw-clicks",
          "classification must be photon-number or raw-clicks");
  require(e.detector.fan_out >= 1 && e.detector.fan_out <= 64, "detector.fan_out must be in [1, 64]");
  validate_unit(e.detector.efficiency, "detector.efficiency");
}

json experiment_json(const ExperimentSettings& e) {
  return {{"visibility", e.visibility},
          {"photon_overlaps", e.photon_overlaps ? json(*e.photon_overlaps) : json(nullptr)},
          {"transmission", e.transmission},
          {"ancilla", e.ancilla},
          {"phase", e.phase},
          {"classification", e.classification},
          {"detector", {{"fan_out", e.detector.fan_out}, {"efficiency", e.detector.efficiency}}}};
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ValidationError("empty entry in list '" + text + "'");
    item = item.substr(b, e - b + 1);
    T value{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ValidationError("cannot parse '" + item + "' in list '" + text + "'");
    out.push_back(value);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

}  // namespace

std::vector<double> GridSpec::resolve() const {
  if (!values.empty()) return values;
  const double lo = start.value_or(0.0), hi = stop.value_or(1.0), h = step.value_or(0.01);
  require(finite(lo) && finite(hi) && finite(h), "grid bounds must be finite");
  require(h > 0.0, "grid step must be positive");
  require(hi >= lo, "grid stop must not be below start");
  const double span = (hi - lo) / h;
  require(span < 1e7, "grid has too many points");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * h;
  if (std::abs(out.back() - hi) <= 1e-9 * h) out.back() = hi;
  return out;
}

json GridSpec::to_json() const {
  if (!values.empty()) return values;
  return {{"start", start.value_or(0.0)}, {"stop", stop.value_or(1.0)}, {"step", step.value_or(0.01)}};
}

json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed config " + path.string() + ": " + e.what());
  }
}

void load(const json& doc, FusionConfig& c) {
  Reader r(doc, "");
  load_experiment(r, c.experiment);
  r.get("input", c.input);
  r.get("heralded_states", c.heralded_states);
  r.get("seed", c.seed);
  r.finish();
}

void load(const json& doc, SweepConfig& c) {
  Reader r(doc, "");
  r.get("kind", c.kind);
  load_grid(r, "grid", c.grid);
  load_experiment(r, c.experiment);
  r.get("fidelity", c.fidelity);
  r.get("seed", c.seed);
  r.finish();
}

void load(const json& doc, PercolateConfig& c) {
  Reader r(doc, "");
  r.get("sizes", c.sizes);
  r.get("boundary", c.boundary);
  r.get("mode", c.mode);
  r.get("observable", c.observable);
  load_grid(r, "grid", c.grid);
  r.get("trials", c.trials);
  r.get("seed", c.seed);
  r.get("threads", c.threads);
  r.finish();
}

void load(const json& doc, PpnrdConfig& c) {
  Reader r(doc, "");
  r.get("n", c.n);
  r.get("k", c.k);
  r.get("eta", c.eta);
  if (r.has("pattern")) {
    std::vector<int> p;
    r.get("pattern", p);
    c.pattern = p;
  }
  r.finish();
}

void load(const json& doc, RateConfig& c) {
  Reader r(doc, "");
  r.get("attempts", c.attempts);
  r.get("eta", c.eta);
  r.get("fold", c.fold);
  r.get("detector", c.detector);
  r.get("source", c.source);
  r.finish();
}

void finalize(SweepConfig& c) {
  const bool unset = c.grid.values.empty() && !c.grid.start && !c.grid.stop && !c.grid.step;
  if (!unset) return;
  if (c.kind == "phase")
    c.grid = GridSpec{0.0, 2.0 * std::numbers::pi, std::numbers::pi / 8.0, {}};
  else
    c.grid = GridSpec{0.9, 1.0, 0.02, {}};
}

void validate(const FusionConfig& c) {
  validate_experiment(c.experiment);
  static const std::set<std::string> inputs{"all", "phi+", "phi-", "psi+", "psi-"};
  require(inputs.count(c.input) == 1, "input must be one of all, phi+, phi-, psi+, psi-");
}

void validate(const SweepConfig& c) {
  require(c.kind == "visibility" || c.kind == "phase", "sweep kind must be visibility or phase");
  validate_experiment(c.experiment);
  const auto grid = c.grid.resolve();
  require(!grid.empty(), "sweep grid is empty");
  for (double v : grid) {
    if (c.kind == "visibility")
      validate_unit(v, "visibility grid values");
    else
      require(finite(v), "phase grid values must be finite");
  }
}

void validate(const PercolateConfig& c) {
  require(!c.sizes.empty(), "sizes must not be empty");
  for (int L : c.sizes) require(L >= 2 && L <= 4096, "lattice sizes must be in [2, 4096]");
  require(c.boundary == "open" || c.boundary == "periodic", "boundary must be open or periodic");
  if (c.boundary == "periodic")
    for (int L : c.sizes) require(L >= 3, "periodic lattices need L >= 3");
  require(c.mode == "site-bond" || c.mode == "bond-only", "mode must be site-bond or bond-only");
  require(c.observable == "largest-cluster" || c.observable == "spanning",
          "observable must be largest-cluster or spanning");
  require(!(c.observable == "spanning" && c.boundary != "open"), "spanning needs an open boundary");
  require(c.trials >= 1, "trials must be at least 1");
  require(c.threads >= 1 && c.threads <= 1024, "threads must be in [1, 1024]");
  const auto grid = c.grid.resolve();
  require(!grid.empty(), "p grid is empty");
  for (double p : grid) validate_unit(p, "p grid values");
}

void validate(const PpnrdConfig& c) {
  require(c.n >= 0 && c.n <= 64, "n must be in [0, 64]");
  require(c.k >= 1 && c.k <= 64, "k must be in [1, 64]");
  validate_unit(c.eta, "eta");
  if (c.pattern) {
    require(!c.pattern->empty(), "pattern must not be empty");
    for (int x : *c.pattern) require(x >= 0 && x <= 64, "pattern entries must be in [0, 64]");
  }
}

void validate(const RateConfig& c) {
  require(finite(c.attempts) && c.attempts >= 0.0, "attempts must be a non-negative rate");
  validate_unit(c.eta, "eta");
  require(c.fold >= 1 && c.fold <= 64, "fold must be in [1, 64]");
  require(c.detector.has_value() == c.source.has_value(), "detector and source efficiencies go together");
  if (c.detector) {
    require(finite(*c.detector) && *c.detector > 0.0 && *c.detector <= 1.0, "detector must be in (0, 1]");
    require(finite(*c.source) && *c.source > 0.0 && *c.source <= 1.0, "source must be in (0, 1]");
    require(c.eta > 0.0, "eta must be positive when deriving a transmission");
  }
}

json to_json(const FusionConfig& c) {
  json j = experiment_json(c.experiment);
  j["input"] = c.input;
  j["heralded_states"] = c.heralded_states;
  j["seed"] = c.seed;
  return j;
}

json to_json(const SweepConfig& c) {
  json j = experiment_json(c.experiment);
  j["kind"] = c.kind;
  j["grid"] = c.grid.to_json();
  j["fidelity"] = c.fidelity;
  j["seed"] = c.seed;
  return j;
}

json to_json(const PercolateConfig& c) {
  return {{"sizes", c.sizes},   {"boundary", c.boundary}, {"mode", c.mode}, {"observable", c.observable},
          {"grid", c.grid.to_json()}, {"trials", c.trials}, {"seed", c.seed}};
}

json to_json(const PpnrdConfig& c) {
  return {{"n", c.n}, {"k", c.k}, {"eta", c.eta}, {"pattern", c.pattern ? json(*c.pattern) : json(nullptr)}};
}

json to_json(const RateConfig& c) {
  return {{"attempts", c.attempts},
          {"eta", c.eta},
          {"fold", c.fold},
          {"detector", c.detector ? json(*c.detector) : json(nullptr)},
          {"source", c.source ? json(*c.source) : json(nullptr)}};
}

std::vector<double> parse_double_list(const std::string& text) { return parse_list<double>(text); }
std::vector<int> parse_int_list(const std::string& text) { return parse_list<int>(text); }

}  // namespace cli
