#include "fri2d/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fri2d/error.hpp"
#include "json.hpp"

namespace fri2d {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw ConfigError("cannot open " + path + " for writing");
    out_ << header << '\n';
  }
  template <typename... T>
  void row(const T&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }
  ~CsvWriter() = default;
  void close() {
    out_.close();
    if (!out_) throw ConfigError("failed writing " + path_);
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  std::string path_;
  std::ofstream out_;
};

std::vector<std::vector<double>> read_csv(const std::string& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ConfigError(path + ": expected header '" + header + "', got '" + line + "'");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
      cells.push_back(v);
    }
    if (cells.size() != 4) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 4 columns");
    rows.push_back(std::move(cells));
  }
  return rows;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + ": invalid JSON (" + e.what() + ")");
  }
}

json range_json(const IndexRange& r) { return json::array({r.min, r.max}); }

IndexRange range_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(what + ": expected [min, max] integers");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

json grid_json(const SpectralGrid& g) {
  return {{"k1", range_json(g.k1())}, {"k2", range_json(g.k2())}, {"omega0x", g.omega0x()}, {"omega0y", g.omega0y()}};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_matrix_json(const Eigen::MatrixXcd& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

Eigen::MatrixXcd complex_matrix_from(const json& j) {
  const auto read = [](const json& a) {
    if (!a.is_array() || a.empty() || !a[0].is_array()) throw ConfigError("q: expected a nonempty 2-D array");
    Eigen::MatrixXd m(a.size(), a[0].size());
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (!a[r].is_array() || a[r].size() != a[0].size()) throw ConfigError("q: ragged rows");
      for (std::size_t c = 0; c < a[r].size(); ++c) m(r, c) = a[r][c].get<double>();
    }
    return m;
  };
  if (j.is_array()) return read(j).cast<cplx>();
  if (!j.is_object() || !j.contains("re")) throw ConfigError("q: expected a 2-D array or {re, im}");
  const Eigen::MatrixXd re = read(j.at("re"));
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = read(j.at("im"));
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw ConfigError("q: re and im shapes differ");
  }
  Eigen::MatrixXcd q(re.rows(), re.cols());
  q.real() = re;
  q.imag() = im;
  return q;
}

json pulses_json(const std::vector<Pulse>& pulses) {
  json out = json::array();
  for (const auto& p : pulses) {
    out.push_back({{"x", p.x}, {"y", p.y}, {"gamma_re", p.gamma.real()}, {"gamma_im", p.gamma.imag()}});
  }
  return out;
}

std::vector<Pulse> pulses_from(const json& j) {
  if (!j.is_array()) throw ConfigError("pulses: expected an array");
  std::vector<Pulse> out;
  for (const auto& e : j) {
    Pulse p;
    p.x = e.at("x").get<double>();
    p.y = e.at("y").get<double>();
    p.gamma = cplx(e.value("gamma_re", 1.0), e.value("gamma_im", 0.0));
    out.push_back(p);
  }
  return out;
}

json config_json(const ExperimentConfig& c) {
  json kernel;
  if (c.kernel == KernelKind::Separable) {
    kernel = {{"type", "separable"}, {"r1", c.r1}, {"r2", c.r2}};
  } else {
    kernel = {{"type", "nonseparable"}};
    kernel["q"] = c.q ? complex_matrix_json(*c.q) : json("ones");
  }
  json pulse;
  if (c.kind == ExperimentKind::Blobs) {
    pulse = {{"shape", "gaussian"}, {"sigma", c.sigma}, {"truncation_halfwidth", c.truncation_halfwidth}};
  } else {
    pulse = {{"shape", "dirac"}};
  }
  json j = {
      {"kind", c.kind == ExperimentKind::Dirac ? "dirac" : "blobs"},
      {"L", c.L},
      {"grid", {{"k1", range_json(c.k1)}, {"k2", range_json(c.k2)}, {"omega0x", c.omega0x}, {"omega0y", c.omega0y}}},
      {"oversampling", c.oversampling},
      {"kernel", kernel},
      {"pulse", pulse},
      {"snr_db", number_or_null(c.snr_db)},
      {"trials", c.trials},
      {"seed", c.seed},
      {"fov", {{"x0", c.fov.x0}, {"x1", c.fov.x1}, {"y0", c.fov.y0}, {"y1", c.fov.y1}}},
      {"pairing", c.pairing == PairingMethod::CoupledPencil ? "coupled" : "assignment"},
      {"pulses", pulses_json(c.pulses)},
  };
  return j;
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

EvalGrid default_eval_grid(const KernelSpec& kernel, KernelDomain domain) {
  EvalGrid g;
  if (domain == KernelDomain::Spatial) {
    const double hx = 1.1 * kernel.half_width_x();
    const double hy = 1.1 * kernel.half_width_y();
    g = {-hx, hx, 201, -hy, hy, 201};
  } else {
    const auto& s = kernel.grid();
    const int kx = s.k1().max_abs() + 2;
    const int ky = s.k2().max_abs() + 2;
    g = {-kx * s.omega0x(), kx * s.omega0x(), 16 * kx + 1, -ky * s.omega0y(), ky * s.omega0y(), 16 * ky + 1};
  }
  return g;
}

void write_kernel_csv(const std::string& path, const KernelSpec& kernel, KernelDomain domain, const EvalGrid& grid) {
  if (grid.nx < 1 || grid.ny < 1) throw ConfigError("write_kernel_csv: grid needs at least one point per axis");
  const bool spatial = domain == KernelDomain::Spatial;
  CsvWriter csv(path, spatial ? "x,y,re,im" : "omega_x,omega_y,re,im");
  const auto coord = [](double a, double b, int n, int i) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
  for (int i = 0; i < grid.nx; ++i) {
    const double x = coord(grid.x0, grid.x1, grid.nx, i);
    for (int j = 0; j < grid.ny; ++j) {
      const double y = coord(grid.y0, grid.y1, grid.ny, j);
      cplx v;
      if (!spatial) {
        v = kernel.frequency(x, y);
      } else if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel.variant())) {
        v = sms_spatial(*sep, x, y);
      } else {
        v = nonsep_spatial(std::get<NonseparableKernel>(kernel.variant()), x, y);
      }
      csv.row(x, y, v.real(), v.imag());
    }
  }
  csv.close();
}

std::string sidecar_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
  }
  return csv_path + ".json";
}

void write_samples(const std::string& csv_path, const SampleSet& samples, const std::string& provenance_json) {
  const auto& cfg = samples.config;
  CsvWriter csv(csv_path, "n1,n2,re,im");
  for (int a = 0; a < cfg.n1.size(); ++a) {
    for (int b = 0; b < cfg.n2.size(); ++b) {
      const cplx v = samples.values(a, b);
      csv.row(cfg.n1.min + a, cfg.n2.min + b, v.real(), v.imag());
    }
  }
  csv.close();
  json side = {{"omega_sx", cfg.omega_sx},
               {"omega_sy", cfg.omega_sy},
               {"n1", range_json(cfg.n1)},
               {"n2", range_json(cfg.n2)},
               {"provenance", parse_json(provenance_json, "provenance")}};
  write_text(sidecar_path(csv_path), side.dump(2) + "\n");
}

SampleSet read_samples(const std::string& csv_path) {
  const json side = parse_json(read_text(sidecar_path(csv_path)), sidecar_path(csv_path));
  SampleSet s;
  try {
    s.config.omega_sx = side.at("omega_sx").get<double>();
    s.config.omega_sy = side.at("omega_sy").get<double>();
    s.config.n1 = range_from(side.at("n1"), "n1");
    s.config.n2 = range_from(side.at("n2"), "n2");
  } catch (const json::exception& e) {
    throw ConfigError(sidecar_path(csv_path) + ": " + e.what());
  }
  if (s.config.n1.size() < 1 || s.config.n2.size() < 1) throw ConfigError(csv_path + ": empty window");
  s.values = Eigen::MatrixXcd::Zero(s.config.n1.size(), s.config.n2.size());
  for (const auto& row : read_csv(csv_path, "n1,n2,re,im")) {
    const int n1 = static_cast<int>(row[0]);
    const int n2 = static_cast<int>(row[1]);
    if (!s.config.n1.contains(n1) || !s.config.n2.contains(n2)) {
      throw ConfigError(csv_path + ": index (" + std::to_string(n1) + ", " + std::to_string(n2) + ") outside window");
    }
    s.values(n1 - s.config.n1.min, n2 - s.config.n2.min) = cplx(row[2], row[3]);
  }
  return s;
}

void write_swce(const std::string& csv_path, const SwceMeasurements& p) {
  CsvWriter csv(csv_path, "k1,k2,re,im");
  for (int a = 0; a < p.grid.k1().size(); ++a) {
    for (int b = 0; b < p.grid.k2().size(); ++b) {
      const cplx v = p.values(a, b);
      csv.row(p.grid.k1().min + a, p.grid.k2().min + b, v.real(), v.imag());
    }
  }
  csv.close();
  write_text(sidecar_path(csv_path), grid_json(p.grid).dump(2) + "\n");
}

SwceMeasurements read_swce(const std::string& csv_path) {
  const json side = parse_json(read_text(sidecar_path(csv_path)), sidecar_path(csv_path));
  std::optional<SpectralGrid> grid;
  try {
    grid.emplace(range_from(side.at("k1"), "k1"), range_from(side.at("k2"), "k2"), side.at("omega0x").get<double>(),
                 side.at("omega0y").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(sidecar_path(csv_path) + ": " + e.what());
  }
  SwceMeasurements p{Eigen::MatrixXcd::Zero(grid->k1().size(), grid->k2().size()), *grid};
  for (const auto& row : read_csv(csv_path, "k1,k2,re,im")) {
    const int k1 = static_cast<int>(row[0]);
    const int k2 = static_cast<int>(row[1]);
    if (!grid->k1().contains(k1) || !grid->k2().contains(k2)) {
      throw ConfigError(csv_path + ": index (" + std::to_string(k1) + ", " + std::to_string(k2) + ") outside grid");
    }
    p.values(k1 - grid->k1().min, k2 - grid->k2().min) = cplx(row[2], row[3]);
  }
  return p;
}

std::string estimation_json(const EstimationResult& r) {
  json locs = json::array();
  for (const auto& l : r.locations) locs.push_back({{"x", l.x}, {"y", l.y}});
  json amps = json::array();
  for (const auto& a : r.amplitudes) amps.push_back({{"re", a.real()}, {"im", a.imag()}});
  json pairing = json::array();
  for (Eigen::Index i = 0; i < r.pairing_matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < r.pairing_matrix.cols(); ++k) row.push_back(r.pairing_matrix(i, k));
    pairing.push_back(row);
  }
  const auto poles = [](const std::vector<cplx>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back({{"re", z.real()}, {"im", z.imag()}});
    return out;
  };
  json j = {{"locations", locs},
            {"amplitudes", amps},
            {"residual", r.residual},
            {"diagnostics",
             {{"pairing_matrix", pairing},
              {"ambiguous_rows", r.ambiguous_rows},
              {"poles_x", poles(r.poles_x)},
              {"poles_y", poles(r.poles_y)}}}};
  return j.dump(2) + "\n";
}

std::string alias_report_json(const AliasReport& r) {
  json j = {{"pass", r.pass},
            {"worst_zero_violation", r.worst_zero_violation},
            {"worst_zero_omega", {r.worst_zero_omega_x, r.worst_zero_omega_y}},
            {"min_grid_magnitude", r.min_grid_magnitude},
            {"max_grid_magnitude", r.max_grid_magnitude},
            {"m_max", r.m_max}};
  return j.dump(2) + "\n";
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2) + "\n"; }

ExperimentConfig config_from_json(const std::string& text) {
  const json j = parse_json(text, "config");
  require_keys(j,
               {"kind", "L", "grid", "oversampling", "kernel", "pulse", "snr_db", "trials", "seed", "fov", "pairing",
                "pulses"},
               "config");
  try {
    const std::string kind = j.value("kind", "dirac");
    ExperimentConfig c;
    if (kind == "dirac") {
      c = default_dirac_config();
    } else if (kind == "blobs") {
      c = default_blob_config();
    } else {
      throw ConfigError("config: kind must be 'dirac' or 'blobs'");
    }
    if (j.contains("L")) c.L = j.at("L").get<int>();
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      require_keys(g, {"k1", "k2", "omega0x", "omega0y"}, "config.grid");
      if (g.contains("k1")) c.k1 = range_from(g.at("k1"), "grid.k1");
      if (g.contains("k2")) c.k2 = range_from(g.at("k2"), "grid.k2");
      if (g.contains("omega0x")) c.omega0x = g.at("omega0x").get<double>();
      if (g.contains("omega0y")) c.omega0y = g.at("omega0y").get<double>();
    }
    if (j.contains("oversampling")) c.oversampling = j.at("oversampling").get<double>();
    if (j.contains("kernel")) {
      const auto& k = j.at("kernel");
      require_keys(k, {"type", "r1", "r2", "q"}, "config.kernel");
      const std::string type = k.value("type", "nonseparable");
      if (type == "separable") {
        c.kernel = KernelKind::Separable;
      } else if (type == "nonseparable") {
        c.kernel = KernelKind::Nonseparable;
      } else {
        throw ConfigError("config.kernel.type must be 'separable' or 'nonseparable'");
      }
      if (k.contains("r1")) c.r1 = k.at("r1").get<int>();
      if (k.contains("r2")) c.r2 = k.at("r2").get<int>();
      if (k.contains("q") && !(k.at("q").is_string() && k.at("q") == "ones")) c.q = complex_matrix_from(k.at("q"));
    }
    if (j.contains("pulse")) {
      const auto& p = j.at("pulse");
      require_keys(p, {"shape", "sigma", "truncation_halfwidth"}, "config.pulse");
      if (p.contains("shape")) {
        const std::string shape = p.at("shape").get<std::string>();
        const std::string expected = c.kind == ExperimentKind::Blobs ? "gaussian" : "dirac";
        if (shape != expected) throw ConfigError("config.pulse.shape '" + shape + "' does not match kind '" + kind + "'");
      }
      if (p.contains("sigma")) {
        c.sigma = p.at("sigma").get<double>();
        c.truncation_halfwidth = 6.0 * c.sigma;
      }
      if (p.contains("truncation_halfwidth")) c.truncation_halfwidth = p.at("truncation_halfwidth").get<double>();
    }
    if (j.contains("snr_db")) {
      const auto& s = j.at("snr_db");
      if (s.is_null()) {
        c.snr_db = std::numeric_limits<double>::infinity();
      } else if (s.is_string()) {
        const std::string v = s.get<std::string>();
        if (v != "inf" && v != "+inf") throw ConfigError("config.snr_db: expected a number, null or \"inf\"");
        c.snr_db = std::numeric_limits<double>::infinity();
      } else {
        c.snr_db = s.get<double>();
      }
    }
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("fov")) {
      const auto& f = j.at("fov");
      require_keys(f, {"x0", "x1", "y0", "y1"}, "config.fov");
      c.fov.x0 = f.value("x0", c.fov.x0);
      c.fov.x1 = f.value("x1", c.fov.x1);
      c.fov.y0 = f.value("y0", c.fov.y0);
      c.fov.y1 = f.value("y1", c.fov.y1);
    }
    if (j.contains("pairing")) {
      const std::string p = j.at("pairing").get<std::string>();
      if (p == "coupled") {
        c.pairing = PairingMethod::CoupledPencil;
      } else if (p == "assignment") {
        c.pairing = PairingMethod::AmplitudeAssignment;
      } else {
        throw ConfigError("config.pairing must be 'coupled' or 'assignment'");
      }
    }
    if (j.contains("pulses")) c.pulses = pulses_from(j.at("pulses"));
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string report_to_json(const ExperimentReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"trial", t.trial},
                      {"squared_error", t.squared_error},
                      {"amplitude_error", t.amplitude_error},
                      {"residual", t.residual}});
  }
  json j = {{"config", config_json(r.config)},
            {"mse", r.mse},
            {"mse_db", number_or_null(r.mse_db)},
            {"mean_amplitude_error", r.mean_amplitude_error},
            {"conventions", {{"mse", kMseConvention}, {"snr", kSnrConvention}}},
            {"trials", trials}};
  return j.dump(2) + "\n";
}

void write_trials_csv(const std::string& path, const ExperimentReport& report) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "trial,pulse,x,y,x_hat,y_hat,gamma_re,gamma_im,gamma_hat_re,gamma_hat_im\n";
  for (const auto& t : report.trials) {
    for (std::size_t l = 0; l < t.truth.size(); ++l) {
      out << t.trial << ',' << l << ',' << fmt(t.truth[l].x) << ',' << fmt(t.truth[l].y) << ','
          << fmt(t.estimates[l].x) << ',' << fmt(t.estimates[l].y) << ',' << fmt(t.truth[l].gamma.real()) << ','
          << fmt(t.truth[l].gamma.imag()) << ',' << fmt(t.amplitudes[l].real()) << ','
          << fmt(t.amplitudes[l].imag()) << '\n';
    }
  }
  if (!out) throw ConfigError("failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ConfigError("failed writing " + path);
}

}  // namespace fri2d
