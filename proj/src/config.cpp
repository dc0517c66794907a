#include "nlmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nlmc/errors.hpp"

namespace nlmc {

namespace pt = boost::property_tree;

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && *begin == ' ') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw InputError(key + ": expected a number, got '" + text + "'");
  return v;
}

long parse_long(const std::string& text, const std::string& key) {
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

void fill_square(std::vector<double>& f, int n, int row_center, int col_center, int size, double value) {
  const int r0 = std::max(0, row_center - size / 2);
  const int c0 = std::max(0, col_center - size / 2);
  const int r1 = std::min(n, r0 + size);
  const int c1 = std::min(n, c0 + size);
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) f[static_cast<std::size_t>(r) * n + c] = value;
  }
}

}  // namespace

SourceSpec SourceSpec::parse(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  SourceSpec spec;
  if (word == "zero") {
    spec.kind = Kind::Zero;
  } else if (word == "constant") {
    std::string v;
    if (!(in >> v)) throw InputError("source 'constant' needs a value");
    spec.kind = Kind::Constant;
    spec.value = parse_double(v, "source");
  } else if (word == "static-default") {
    spec.kind = Kind::StaticDefault;
  } else if (word == "five-spot") {
    spec.kind = Kind::FiveSpot;
  } else if (word == "file") {
    spec.kind = Kind::File;
    if (!(in >> spec.path)) throw InputError("source 'file' needs a path");
  } else {
    throw InputError("unknown source '" + text + "'");
  }
  std::string extra;
  if (in >> extra) throw InputError("trailing text in source '" + text + "'");
  return spec;
}

std::string SourceSpec::to_text() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return "constant " + format_double(value);
    case Kind::StaticDefault: return "static-default";
    case Kind::FiveSpot: return "five-spot";
    case Kind::File: return "file " + path;
  }
  return "zero";
}

std::vector<double> static_default_source(int n) {
  std::vector<double> f(static_cast<std::size_t>(n) * n, 0.0);
  fill_square(f, n, n / 4, n / 4, 16, 1.0);
  fill_square(f, n, 3 * n / 4, 3 * n / 4, 16, -1.0);
  return f;
}

std::vector<double> five_spot_source(int n) {
  std::vector<double> f(static_cast<std::size_t>(n) * n, 0.0);
  const int s = std::min(8, n);
  fill_square(f, n, n / 2, n / 2, 8, 1.0);
  fill_square(f, n, s / 2, s / 2, s, -0.25);
  fill_square(f, n, s / 2, n - s + s / 2, s, -0.25);
  fill_square(f, n, n - s + s / 2, s / 2, s, -0.25);
  fill_square(f, n, n - s + s / 2, n - s + s / 2, s, -0.25);
  return f;
}

std::vector<double> sample_source(const SourceSpec& spec, int n, const std::filesystem::path& base_dir) {
  const auto cells = static_cast<std::size_t>(n) * n;
  switch (spec.kind) {
    case SourceSpec::Kind::Zero: return std::vector<double>(cells, 0.0);
    case SourceSpec::Kind::Constant: return std::vector<double>(cells, spec.value);
    case SourceSpec::Kind::StaticDefault: return static_default_source(n);
    case SourceSpec::Kind::FiveSpot: return five_spot_source(n);
    case SourceSpec::Kind::File: {
      const auto path = base_dir / spec.path;
      std::ifstream in(path);
      if (!in) throw InputError("cannot open source file " + path.string());
      return read_matrix(in, n, n, path.string());
    }
  }
  return std::vector<double>(cells, 0.0);
}

std::filesystem::path ExperimentConfig::resolve(const std::string& path) const {
  return base_dir / path;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return to_text(*this) == to_text(o);
}

namespace {

const std::set<std::string> kKeys = {
    "grid.n_coarse",        "grid.refine",         "media.source",       "media.contrast",
    "media.seed",           "media.channels",      "media.inclusions",   "media.channel_width",
    "media.manifest",       "media.sigma",         "partition.mode",     "partition.threshold",
    "basis.layers",         "basis.threads",       "basis.constraint_tol", "source.f1",
    "source.f2",            "transient.horizon",   "transient.dt",       "transient.mass",
    "transient.initial",    "solver.kind",         "solver.rtol",        "sweep.schedule",
    "decay.dof",            "decay.layers",        "decay.max_global_unknowns", "output.dir"};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw InputError("config: key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) {
      (void)value;
      if (!kKeys.count(section + "." + key)) throw InputError("config: unknown key " + section + "." + key);
    }
  }

  ExperimentConfig c;
  c.base_dir = base_dir;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  };
  auto get_int = [&](const std::string& key, auto& out) {
    if (auto v = get(key)) out = static_cast<std::remove_reference_t<decltype(out)>>(parse_long(*v, key));
  };
  auto get_double = [&](const std::string& key, double& out) {
    if (auto v = get(key)) out = parse_double(*v, key);
  };

  get_int("grid.n_coarse", c.n_coarse);
  get_int("grid.refine", c.refine);
  if (auto v = get("media.source")) c.media_source = *v;
  get_double("media.contrast", c.contrast);
  if (auto v = get("media.seed")) {
    const auto res = std::from_chars(v->data(), v->data() + v->size(), c.seed);
    if (res.ec != std::errc() || res.ptr != v->data() + v->size()) throw InputError("media.seed: expected an unsigned integer");
  }
  get_int("media.channels", c.channels);
  get_int("media.inclusions", c.inclusions);
  get_int("media.channel_width", c.channel_width);
  if (auto v = get("media.manifest")) c.manifest = *v;
  get_double("media.sigma", c.sigma);
  if (auto v = get("partition.mode")) c.partition = parse_partition_mode(*v);
  get_double("partition.threshold", c.threshold);
  get_int("basis.layers", c.layers);
  get_int("basis.threads", c.threads);
  get_double("basis.constraint_tol", c.constraint_tol);
  if (auto v = get("source.f1")) c.f1 = SourceSpec::parse(*v);
  if (auto v = get("source.f2")) c.f2 = SourceSpec::parse(*v);
  get_double("transient.horizon", c.horizon);
  get_double("transient.dt", c.dt);
  if (auto v = get("transient.mass")) c.mass = parse_mass_kind(*v);
  if (auto v = get("transient.initial")) c.initial = *v;
  if (auto v = get("solver.kind")) c.solver = parse_solver_kind(*v);
  get_double("solver.rtol", c.rtol);
  if (auto v = get("sweep.schedule")) {
    std::istringstream s(*v);
    std::string item;
    while (s >> item) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw InputError("sweep.schedule: expected n_coarse:layers, got '" + item + "'");
      c.sweep.emplace_back(static_cast<int>(parse_long(item.substr(0, colon), "sweep.schedule")),
                           static_cast<int>(parse_long(item.substr(colon + 1), "sweep.schedule")));
    }
  }
  if (auto v = get("decay.dof")) c.decay_dof = *v;
  if (auto v = get("decay.layers")) {
    std::istringstream s(*v);
    std::string item;
    while (s >> item) c.decay_layers.push_back(static_cast<int>(parse_long(item, "decay.layers")));
  }
  get_int("decay.max_global_unknowns", c.max_global_unknowns);
  if (auto v = get("output.dir")) c.output_dir = *v;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[grid]\n"
      << "n_coarse = " << c.n_coarse << '\n'
      << "refine = " << c.refine << '\n'
      << "\n[media]\n"
      << "source = " << c.media_source << '\n'
      << "contrast = " << format_double(c.contrast) << '\n'
      << "seed = " << c.seed << '\n'
      << "channels = " << c.channels << '\n'
      << "inclusions = " << c.inclusions << '\n'
      << "channel_width = " << c.channel_width << '\n';
  if (!c.manifest.empty()) out << "manifest = " << c.manifest << '\n';
  out << "sigma = " << format_double(c.sigma) << '\n'
      << "\n[partition]\n"
      << "mode = " << to_string(c.partition) << '\n'
      << "threshold = " << format_double(c.threshold) << '\n'
      << "\n[basis]\n"
      << "layers = " << c.layers << '\n'
      << "threads = " << c.threads << '\n'
      << "constraint_tol = " << format_double(c.constraint_tol) << '\n'
      << "\n[source]\n"
      << "f1 = " << c.f1.to_text() << '\n'
      << "f2 = " << c.f2.to_text() << '\n'
      << "\n[transient]\n"
      << "horizon = " << format_double(c.horizon) << '\n'
      << "dt = " << format_double(c.dt) << '\n'
      << "mass = " << to_string(c.mass) << '\n'
      << "initial = " << c.initial << '\n'
      << "\n[solver]\n"
      << "kind = " << to_string(c.solver) << '\n'
      << "rtol = " << format_double(c.rtol) << '\n';
  if (!c.sweep.empty()) {
    out << "\n[sweep]\nschedule =";
    for (const auto& [n, m] : c.sweep) out << ' ' << n << ':' << m;
    out << '\n';
  }
  out << "\n[decay]\n"
      << "dof = " << c.decay_dof << '\n';
  if (!c.decay_layers.empty()) {
    out << "layers =";
    for (const int m : c.decay_layers) out << ' ' << m;
    out << '\n';
  }
  out << "max_global_unknowns = " << c.max_global_unknowns << '\n'
      << "\n[output]\n"
      << "dir = " << c.output_dir << '\n';
  return out.str();
}

void validate(const ExperimentConfig& c) {
  if (c.n_coarse < 1 || c.refine < 1) throw InputError("grid sizes must be positive");
  if (c.media_source != "generate" && c.media_source != "files") {
    throw InputError("media.source must be 'generate' or 'files'");
  }
  if (c.media_source == "generate" && !(c.contrast >= 1.0)) throw InputError("media.contrast must be >= 1");
  if (c.media_source == "files") {
    if (c.manifest.empty()) throw InputError("media.manifest is required when media.source = files");
    const auto path = c.resolve(c.manifest);
    if (!std::filesystem::exists(path)) throw InputError("media manifest not found: " + path.string());
  }
  if (c.layers < 0) throw InputError("basis.layers must be nonnegative");
  if (!(c.constraint_tol > 0.0)) throw InputError("basis.constraint_tol must be positive");
  if (!(c.rtol > 0.0)) throw InputError("solver.rtol must be positive");
  for (const auto* spec : {&c.f1, &c.f2}) {
    if (spec->kind == SourceSpec::Kind::File && !std::filesystem::exists(c.resolve(spec->path))) {
      throw InputError("source file not found: " + c.resolve(spec->path).string());
    }
  }
  step_count(c.dt, c.horizon);
  if (c.initial != "zero") {
    std::istringstream in(c.initial);
    std::string word, path;
    in >> word >> path;
    if (word != "file" || path.empty()) throw InputError("transient.initial must be 'zero' or 'file <path>'");
    if (!std::filesystem::exists(c.resolve(path))) throw InputError("initial state file not found: " + c.resolve(path).string());
  }
  const int nf = c.n_fine();
  for (const auto& [n, m] : c.sweep) {
    if (n < 1 || nf % n != 0) {
      throw InputError("sweep entry 1/" + std::to_string(n) + " does not divide the fine grid (" +
                       std::to_string(nf) + " cells per side)");
    }
    if (m < 0) throw InputError("sweep layers must be nonnegative");
  }
  for (const int m : c.decay_layers) {
    if (m < 0) throw InputError("decay layers must be nonnegative");
  }
  if (c.decay_dof != "center") parse_long(c.decay_dof, "decay.dof");
  if (c.max_global_unknowns < 1) throw InputError("decay.max_global_unknowns must be positive");
}

}  // namespace nlmc
