#include "qcorr/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qcorr/version.hpp"

namespace qcorr::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

// Tracks which keys of an object have been consumed so typos surface as
// "unknown field" instead of being silently ignored.
class ObjectView {
 public:
  ObjectView(const json& j, std::string path) : path_(std::move(path)) {
    if (!j.is_object()) fail(path_.empty() ? "(top level)" : path_, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) entries_.emplace(it.key(), &it.value());
  }

  const json* take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    const json* value = it->second;
    entries_.erase(it);
    return value;
  }

  void finish() const {
    if (!entries_.empty())
      fail(join_path(path_, entries_.begin()->first), "unknown field");
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, const json*> entries_;
};

double as_number(const json* v, const std::string& field, double dflt) {
  if (!v || v->is_null()) return dflt;
  if (!v->is_number()) fail(field, "expected a number");
  return v->get<double>();
}

int as_int(const json* v, const std::string& field, int dflt) {
  if (!v || v->is_null()) return dflt;
  if (!v->is_number_integer()) fail(field, "expected an integer");
  return v->get<int>();
}

bool as_bool(const json* v, const std::string& field, bool dflt) {
  if (!v || v->is_null()) return dflt;
  if (!v->is_boolean()) fail(field, "expected a boolean");
  return v->get<bool>();
}

std::string as_string(const json* v, const std::string& field, const std::string& dflt) {
  if (!v || v->is_null()) return dflt;
  if (!v->is_string()) fail(field, "expected a string");
  return v->get<std::string>();
}

// Angles that may be switched off: absent keeps the default, an explicit
// null disables the element.
std::optional<double> as_optional_angle(const json* v, const std::string& field,
                                        std::optional<double> dflt) {
  if (!v) return dflt;
  if (v->is_null()) return std::nullopt;
  if (!v->is_number()) fail(field, "expected a number or null");
  return v->get<double>();
}

cplx as_complex_value(const json& e, const std::string& field) {
  if (e.is_number()) return cplx(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return cplx(e[0].get<double>(), e[1].get<double>());
  fail(field, "expected a number or an [re, im] pair");
}

cplx as_complex(const json* v, const std::string& field, cplx dflt) {
  if (!v || v->is_null()) return dflt;
  return as_complex_value(*v, field);
}

std::vector<cplx> as_amplitudes(const json* v, const std::string& field,
                                const std::vector<cplx>& dflt) {
  if (!v || v->is_null()) return dflt;
  if (!v->is_array() || v->empty()) fail(field, "expected a nonempty array of amplitudes");
  std::vector<cplx> out;
  out.reserve(v->size());
  for (std::size_t i = 0; i < v->size(); ++i)
    out.push_back(as_complex_value((*v)[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::shared_ptr<const ModeGrid> parse_grid(const json* v, const std::string& field,
                                           const ModeGrid& dflt) {
  double center = dflt.center();
  double spacing = dflt.spacing();
  int bins = dflt.count();
  if (v) {
    ObjectView g(*v, field);
    center = as_number(g.take("center"), join_path(field, "center"), center);
    spacing = as_number(g.take("spacing"), join_path(field, "spacing"), spacing);
    bins = as_int(g.take("bins"), join_path(field, "bins"), bins);
    g.finish();
  }
  return std::make_shared<ModeGrid>(center, spacing, bins);
}

json grid_json(const ModeGrid& g) {
  return json{{"center", g.center()}, {"spacing", g.spacing()}, {"bins", g.count()}};
}

json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json amplitudes_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(complex_json(z));
  return out;
}

ModeGrid default_mz_grid() { return ModeGrid(2.356e15, 1.0e12, 8); }
ModeGrid default_thermal_grid() { return ModeGrid(1.0e7, 1.0e5, 2); }

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.hom = default_hom_config();
  config.mz = default_mz_config();
  config.mz.grid = std::make_shared<ModeGrid>(default_mz_grid());
  config.thermal.q_grid = std::make_shared<ModeGrid>(default_thermal_grid());
  return config;
}

std::string interaction_name(MzInteraction i) {
  switch (i) {
    case MzInteraction::none: return "none";
    case MzInteraction::generic_entangler: return "generic_entangler";
    case MzInteraction::raman: return "raman";
  }
  return "none";
}

std::string spdc_name(SpdcType t) {
  return t == SpdcType::type_i ? "type_i" : "type_ii";
}

json render_config(const ExperimentConfig& config) {
  json j;
  j["experiment"] = to_string(config.kind);

  j["output"] = json{{"csv", config.output.csv},
                     {"summary", config.output.summary},
                     {"manifest", config.output.manifest},
                     {"antistokes_csv", config.output.antistokes_csv}};

  const HomConfig& h = config.hom;
  json hom;
  hom["grid"] = grid_json(*h.grid);
  hom["pump_center"] = h.pump.center;
  hom["pump_sigma"] = h.pump.sigma;
  hom["spdc_type"] = spdc_name(h.type);
  hom["bs_transmission"] = h.bs_transmission;
  hom["bs_reflection"] = h.bs_reflection;
  hom["polarizer1"] = h.polarizer1 ? json(*h.polarizer1) : json(nullptr);
  hom["polarizer2"] = h.polarizer2 ? json(*h.polarizer2) : json(nullptr);
  hom["coincidence_window"] =
      std::isinf(h.coincidence_window) ? 0.0 : h.coincidence_window;
  hom["delay"] = h.delay;
  hom["sweep_points"] = h.sweep_points;
  hom["sweep_coherence_times"] = h.sweep_coherence_times;
  hom["max_excitations"] = h.max_excitations;
  j["hom"] = std::move(hom);

  const MzConfig& m = config.mz;
  json mz;
  mz["grid"] = grid_json(*m.grid);
  mz["bs1_transmission"] = complex_json(m.bs1_transmission);
  mz["bs1_reflection"] = complex_json(m.bs1_reflection);
  mz["bs2_transmission"] = complex_json(m.bs2_transmission);
  mz["bs2_reflection"] = complex_json(m.bs2_reflection);
  mz["phase"] = m.phase;
  mz["interaction"] = interaction_name(m.interaction);
  mz["env1"] = amplitudes_json(m.env1.amplitudes);
  mz["env2"] = amplitudes_json(m.env2.amplitudes);
  mz["env_overlap"] = json(nullptr);  // shortcut input; echoed resolved in env1/env2
  mz["source_bin"] = m.source_bin;
  mz["envelope_sigma"] = m.envelope_sigma;
  mz["stokes_shift_arm1"] = m.raman.stokes_shift_arm1;
  mz["stokes_shift_arm2"] = m.raman.stokes_shift_arm2;
  mz["markovian_trace"] = m.raman.markovian_trace;
  mz["herald_port"] = qcorr::to_string(m.herald_port);
  mz["sweep_points"] = m.sweep_points;
  j["mz"] = std::move(mz);

  const ThermalScanConfig& t = config.thermal;
  json thermal;
  thermal["grid"] = grid_json(*t.q_grid);
  thermal["x1"] = t.x1;
  thermal["points"] = t.points;
  j["thermal"] = std::move(thermal);

  return j;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void validate_raman_geometry(const MzConfig& mz) {
  const ModeGrid& grid = *mz.grid;
  auto shift_bins = [&](double shift, const char* field) {
    const double ratio = shift / grid.spacing();
    const long m = std::lround(ratio);
    if (shift < 0.0) fail(field, "Stokes shift must be non-negative");
    if (std::abs(ratio - static_cast<double>(m)) > 1e-9)
      fail(field, "Stokes shift is not a whole number of grid bins");
    return static_cast<int>(m);
  };
  const int m1 = shift_bins(mz.raman.stokes_shift_arm1, "mz.stokes_shift_arm1");
  const int m2 = shift_bins(mz.raman.stokes_shift_arm2, "mz.stokes_shift_arm2");
  const int source = mz.source_bin < 0 ? grid.count() - 1 : mz.source_bin;
  if (source >= grid.count()) fail("mz.source_bin", "lies outside the grid");
  if (source - std::max(m1, m2) < 0)
    fail("mz.source_bin", "its Stokes target falls below the grid");
  if (mz.envelope_sigma < 0.0) fail("mz.envelope_sigma", "must be non-negative");
}

void validate(const ExperimentConfig& config) {
  const HomConfig& h = config.hom;
  if (h.sweep_points < 1) fail("hom.sweep_points", "must be positive");
  if (h.sweep_coherence_times <= 0.0) fail("hom.sweep_coherence_times", "must be positive");
  if (h.max_excitations < 2) fail("hom.max_excitations", "cannot hold a photon pair");
  if (h.pump.sigma < 0.0) fail("hom.pump_sigma", "must be non-negative");
  // Constructing the elements runs their own unitarity/domain checks.
  (void)BeamSplitter::from_magnitudes(h.bs_transmission, h.bs_reflection,
                                      {Path::arm1, Path::arm2}, {Path::out1, Path::out2});

  const MzConfig& m = config.mz;
  if (m.sweep_points < 1) fail("mz.sweep_points", "must be positive");
  (void)BeamSplitter(m.bs1_transmission, m.bs1_reflection, {Path::arm1, Path::arm2},
                     {Path::arm1, Path::arm2});
  (void)BeamSplitter(m.bs2_transmission, m.bs2_reflection, {Path::arm1, Path::arm2},
                     {Path::out1, Path::out2});
  m.env1.require_unit();
  m.env2.require_unit();
  if (m.herald_port != Path::out1 && m.herald_port != Path::out2)
    fail("mz.herald_port", "must be out1 or out2");
  if (m.interaction == MzInteraction::raman) validate_raman_geometry(m);

  const ThermalScanConfig& t = config.thermal;
  if (t.q_grid->count() < 2) fail("thermal.grid.bins", "needs at least two source modes");
  if (t.points < 0) fail("thermal.points", "must be non-negative");
  if (!std::isfinite(t.x1)) fail("thermal.x1", "must be finite");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::hom: return "hom";
    case ExperimentKind::mz: return "mz";
    case ExperimentKind::gedanken: return "gedanken";
    case ExperimentKind::thermal_g2: return "thermal_g2";
  }
  return "hom";
}

std::string default_config_text() {
  return render_config(default_config()).dump(2) + "\n";
}

ExperimentConfig load_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig config = default_config();
  ObjectView top(root, "");

  const json* exp = top.take("experiment");
  const std::string kind_name = as_string(exp, "experiment", "");
  if (kind_name.empty()) fail("experiment", "required field is missing");
  if (kind_name == "hom") config.kind = ExperimentKind::hom;
  else if (kind_name == "mz") config.kind = ExperimentKind::mz;
  else if (kind_name == "gedanken") config.kind = ExperimentKind::gedanken;
  else if (kind_name == "thermal_g2") config.kind = ExperimentKind::thermal_g2;
  else fail("experiment", "unknown experiment '" + kind_name + "'");

  if (const json* v = top.take("output")) {
    ObjectView out(*v, "output");
    config.output.csv = as_string(out.take("csv"), "output.csv", config.output.csv);
    config.output.summary =
        as_string(out.take("summary"), "output.summary", config.output.summary);
    config.output.manifest =
        as_string(out.take("manifest"), "output.manifest", config.output.manifest);
    config.output.antistokes_csv = as_string(out.take("antistokes_csv"),
                                             "output.antistokes_csv",
                                             config.output.antistokes_csv);
    out.finish();
  }

  if (const json* v = top.take("hom")) {
    ObjectView hom(*v, "hom");
    HomConfig& h = config.hom;
    h.grid = parse_grid(hom.take("grid"), "hom.grid", *h.grid);
    h.pump.center = as_number(hom.take("pump_center"), "hom.pump_center", h.pump.center);
    h.pump.sigma = as_number(hom.take("pump_sigma"), "hom.pump_sigma", h.pump.sigma);
    const std::string type =
        as_string(hom.take("spdc_type"), "hom.spdc_type", spdc_name(h.type));
    if (type == "type_i") h.type = SpdcType::type_i;
    else if (type == "type_ii") h.type = SpdcType::type_ii;
    else fail("hom.spdc_type", "unknown type '" + type + "'");
    h.bs_transmission =
        as_number(hom.take("bs_transmission"), "hom.bs_transmission", h.bs_transmission);
    h.bs_reflection =
        as_number(hom.take("bs_reflection"), "hom.bs_reflection", h.bs_reflection);
    h.polarizer1 = as_optional_angle(hom.take("polarizer1"), "hom.polarizer1", h.polarizer1);
    h.polarizer2 = as_optional_angle(hom.take("polarizer2"), "hom.polarizer2", h.polarizer2);
    const double window = as_number(hom.take("coincidence_window"),
                                    "hom.coincidence_window", 0.0);
    h.coincidence_window =
        window <= 0.0 ? std::numeric_limits<double>::infinity() : window;
    h.delay = as_number(hom.take("delay"), "hom.delay", h.delay);
    h.sweep_points = as_int(hom.take("sweep_points"), "hom.sweep_points", h.sweep_points);
    h.sweep_coherence_times = as_number(hom.take("sweep_coherence_times"),
                                        "hom.sweep_coherence_times",
                                        h.sweep_coherence_times);
    h.max_excitations =
        as_int(hom.take("max_excitations"), "hom.max_excitations", h.max_excitations);
    hom.finish();
  }

  if (const json* v = top.take("mz")) {
    ObjectView mz(*v, "mz");
    MzConfig& m = config.mz;
    m.grid = parse_grid(mz.take("grid"), "mz.grid", *m.grid);
    m.bs1_transmission =
        as_complex(mz.take("bs1_transmission"), "mz.bs1_transmission", m.bs1_transmission);
    m.bs1_reflection =
        as_complex(mz.take("bs1_reflection"), "mz.bs1_reflection", m.bs1_reflection);
    m.bs2_transmission =
        as_complex(mz.take("bs2_transmission"), "mz.bs2_transmission", m.bs2_transmission);
    m.bs2_reflection =
        as_complex(mz.take("bs2_reflection"), "mz.bs2_reflection", m.bs2_reflection);
    m.phase = as_number(mz.take("phase"), "mz.phase", m.phase);
    const std::string inter = as_string(mz.take("interaction"), "mz.interaction",
                                        interaction_name(m.interaction));
    if (inter == "none") m.interaction = MzInteraction::none;
    else if (inter == "generic_entangler") m.interaction = MzInteraction::generic_entangler;
    else if (inter == "raman") m.interaction = MzInteraction::raman;
    else fail("mz.interaction", "unknown interaction '" + inter + "'");
    m.env1.amplitudes = as_amplitudes(mz.take("env1"), "mz.env1", m.env1.amplitudes);
    m.env2.amplitudes = as_amplitudes(mz.take("env2"), "mz.env2", m.env2.amplitudes);
    if (const json* g = mz.take("env_overlap"); g && !g->is_null()) {
      const cplx gamma = as_complex_value(*g, "mz.env_overlap");
      try {
        auto [e1, e2] = EnvironmentState::pair_with_overlap(gamma);
        m.env1 = std::move(e1);
        m.env2 = std::move(e2);
      } catch (const InvalidEnvironment& e) {
        fail("mz.env_overlap", e.what());
      }
    }
    m.source_bin = as_int(mz.take("source_bin"), "mz.source_bin", m.source_bin);
    m.envelope_sigma =
        as_number(mz.take("envelope_sigma"), "mz.envelope_sigma", m.envelope_sigma);
    m.raman.stokes_shift_arm1 = as_number(mz.take("stokes_shift_arm1"),
                                          "mz.stokes_shift_arm1",
                                          m.raman.stokes_shift_arm1);
    m.raman.stokes_shift_arm2 = as_number(mz.take("stokes_shift_arm2"),
                                          "mz.stokes_shift_arm2",
                                          m.raman.stokes_shift_arm2);
    m.raman.markovian_trace = as_bool(mz.take("markovian_trace"), "mz.markovian_trace",
                                      m.raman.markovian_trace);
    const std::string port =
        as_string(mz.take("herald_port"), "mz.herald_port", qcorr::to_string(m.herald_port));
    if (port == "out1") m.herald_port = Path::out1;
    else if (port == "out2") m.herald_port = Path::out2;
    else fail("mz.herald_port", "must be out1 or out2");
    m.sweep_points = as_int(mz.take("sweep_points"), "mz.sweep_points", m.sweep_points);
    mz.finish();
  }

  if (const json* v = top.take("thermal")) {
    ObjectView thermal(*v, "thermal");
    ThermalScanConfig& t = config.thermal;
    t.q_grid = parse_grid(thermal.take("grid"), "thermal.grid", *t.q_grid);
    t.x1 = as_number(thermal.take("x1"), "thermal.x1", t.x1);
    t.points = as_int(thermal.take("points"), "thermal.points", t.points);
    thermal.finish();
  }

  top.finish();

  // The heralded-phonon chain is the Raman interferometer by definition.
  if (config.kind == ExperimentKind::gedanken) config.mz.interaction = MzInteraction::raman;

  validate(config);

  const json echo = render_config(config);
  config.effective_json = echo.dump(2) + "\n";
  config.config_hash = fnv1a(echo.dump());
  return config;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config_text(buffer.str());
}

namespace {

bool probability_like(const std::string& column) {
  if (column.rfind("p_", 0) == 0) return true;
  if (column == "pair_pass_probability" || column == "herald_probability" ||
      column == "concurrence")
    return true;
  return column.find("purity") != std::string::npos ||
         column.find("visibility") != std::string::npos;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::vector<bool> bounded(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) bounded[c] = probability_like(columns[c]);

  std::string text;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) text += ',';
    text += columns[c];
  }
  text += '\n';

  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw InvariantViolation("CSV row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      double v = row[c];
      if (bounded[c]) {
        if (v < -kNormTol || v > 1.0 + kNormTol)
          throw InvariantViolation("column '" + columns[c] + "' value " +
                                   std::to_string(v) + " is outside [0, 1]");
        v = std::min(std::max(v, 0.0), 1.0);
      }
      if (c) text += ',';
      text += format_number(v);
    }
    text += '\n';
  }
  write_text(path, text);
}

RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir, int threads) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);

  ExperimentResult primary;
  std::optional<ExperimentResult> readout;
  std::string csv_name = config.output.csv;

  switch (config.kind) {
    case ExperimentKind::hom: {
      HomConfig c = config.hom;
      c.threads = threads;
      primary = run_hom(c);
      if (csv_name.empty()) csv_name = "hom_dip.csv";
      break;
    }
    case ExperimentKind::mz: {
      MzConfig c = config.mz;
      c.threads = threads;
      primary = run_mz(c);
      if (csv_name.empty()) csv_name = "mz_fringe.csv";
      break;
    }
    case ExperimentKind::gedanken: {
      MzConfig c = config.mz;
      c.threads = threads;
      GedankenResult g = run_gedanken(c);
      ExperimentResult probe =
          run_antistokes_probe(g.phonon_state, c.sweep_points, threads);
      primary = std::move(g.sweep);
      const double coherence = 2.0 * std::abs(g.phonon_offdiag);
      primary.metrics["herald_probability"] = g.herald_probability;
      primary.metrics["concurrence"] = g.concurrence;
      primary.metrics["phonon_coherence"] = coherence;
      primary.metrics["readout_visibility"] = probe.metrics.at("visibility");
      primary.metrics["readout_coherence_gap"] =
          std::abs(probe.metrics.at("visibility") - coherence);
      readout = std::move(probe);
      if (csv_name.empty()) csv_name = "gedanken_sweep.csv";
      break;
    }
    case ExperimentKind::thermal_g2: {
      const G2Result scan = g2_scan(config.thermal.q_grid, SpatialField::plane_waves(),
                                    config.thermal.x1, config.thermal.points, threads);
      primary.experiment = "thermal_g2";
      primary.columns = {"x1", "x2",     "g2_direct", "g11",
                         "g22", "re_g12", "im_g12",    "g2_via_g1"};
      primary.rows.reserve(scan.x2.size());
      for (std::size_t k = 0; k < scan.x2.size(); ++k)
        primary.rows.push_back({scan.x1, scan.x2[k], scan.direct[k], scan.g11[k],
                                scan.g22[k], scan.g12[k].real(), scan.g12[k].imag(),
                                scan.via_g1[k]});
      primary.metrics["visibility"] = scan.visibility;
      primary.metrics["visibility_symmetric"] = scan.visibility_symmetric;
      primary.metrics["dc_subtracted_visibility"] = scan.dc_subtracted_visibility;
      primary.metrics["cauchy_schwarz_max"] = scan.cauchy_schwarz_max;
      primary.metrics["direct_over_via_g1"] = scan.direct_over_via_g1;
      primary.metrics["direct_over_density"] = scan.direct_over_density;
      primary.metadata["basis_order"] = kBasisOrderVersion;
      primary.metadata["field_model"] = "plane_waves";
      if (csv_name.empty()) csv_name = "thermal_g2_scan.csv";
      break;
    }
  }

  RunArtifacts artifacts;
  artifacts.metrics = primary.metrics;

  const std::filesystem::path csv_path = out_dir / csv_name;
  write_csv(csv_path, primary.columns, primary.rows);
  artifacts.files.push_back(csv_path);

  std::vector<std::string> output_names{csv_name};
  if (readout) {
    const std::filesystem::path probe_path = out_dir / config.output.antistokes_csv;
    write_csv(probe_path, readout->columns, readout->rows);
    artifacts.files.push_back(probe_path);
    output_names.push_back(config.output.antistokes_csv);
  }

  json summary;
  summary["experiment"] = primary.experiment;
  summary["metrics"] = primary.metrics;
  summary["metadata"] = primary.metadata;
  if (readout) {
    summary["readout_metrics"] = readout->metrics;
    summary["readout_metadata"] = readout->metadata;
  }
  const std::filesystem::path summary_path = out_dir / config.output.summary;
  write_text(summary_path, summary.dump(2) + "\n");
  artifacts.files.push_back(summary_path);
  output_names.push_back(config.output.summary);

  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char hash[32];
  std::snprintf(hash, sizeof(hash), "0x%016llx",
                static_cast<unsigned long long>(config.config_hash));
  json manifest;
  manifest["software_version"] = kVersion;
  manifest["basis_order"] = kBasisOrderVersion;
  manifest["experiment"] = to_string(config.kind);
  manifest["config"] = json::parse(config.effective_json);
  manifest["config_hash_fnv1a"] = hash;
  manifest["metrics"] = primary.metrics;
  manifest["threads"] = threads;
  manifest["duration_seconds"] = duration;
  manifest["outputs"] = output_names;
  const std::filesystem::path manifest_path = out_dir / config.output.manifest;
  write_text(manifest_path, manifest.dump(2) + "\n");
  artifacts.files.push_back(manifest_path);

  return artifacts;
}

}  // namespace qcorr::cli
