#include "nlmc/media.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "nlmc/errors.hpp"

namespace nlmc {

double MediaField::kappa_min(int continuum) const {
  const auto& k = kappa(continuum);
  return *std::min_element(k.begin(), k.end());
}

double MediaField::kappa_max(int continuum) const {
  const auto& k = kappa(continuum);
  return *std::max_element(k.begin(), k.end());
}

double MediaField::contrast(int continuum) const {
  return kappa_max(continuum) / kappa_min(continuum);
}

void MediaField::validate() const {
  const auto expected = static_cast<std::size_t>(num_cells());
  if (n < 1) throw InputError("media field has no cells");
  const std::pair<const char*, const std::vector<double>*> fields[] = {
      {"kappa1", &kappa1}, {"kappa2", &kappa2}, {"sigma", &sigma}, {"c1", &c1}, {"c2", &c2}};
  for (const auto& [name, values] : fields) {
    if (values->size() != expected) {
      throw InputError(std::string("field ") + name + " has " + std::to_string(values->size()) +
                       " values, expected " + std::to_string(expected));
    }
    const bool allow_zero = values == &sigma;
    for (std::size_t k = 0; k < values->size(); ++k) {
      const double v = (*values)[k];
      if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
        throw InputError(std::string("field ") + name + " must be " +
                         (allow_zero ? "nonnegative" : "positive") + " (cell " +
                         std::to_string(k) + " has value " + std::to_string(v) + ")");
      }
    }
  }
}

MediaField uniform_media(const GridPair& grid, double kappa, double sigma, double c) {
  const auto cells = static_cast<std::size_t>(grid.num_fine());
  MediaField field;
  field.n = grid.n_fine();
  field.kappa1.assign(cells, kappa);
  field.kappa2.assign(cells, kappa);
  field.sigma.assign(cells, sigma);
  field.c1.assign(cells, c);
  field.c2.assign(cells, c);
  field.validate();
  return field;
}

namespace {

void paint(std::vector<std::uint8_t>& mask, int n, int row0, int col0, int row1, int col1) {
  row0 = std::clamp(row0, 0, n);
  row1 = std::clamp(row1, 0, n);
  col0 = std::clamp(col0, 0, n);
  col1 = std::clamp(col1, 0, n);
  for (int r = row0; r < row1; ++r) {
    for (int c = col0; c < col1; ++c) mask[static_cast<std::size_t>(r) * n + c] = 1;
  }
}

// Portable bounded draw; the std distributions differ across standard libraries.
int draw(std::mt19937_64& rng, int lo, int hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

ChannelLayout random_long_channels(std::mt19937_64& rng, int n, const ChannelsSpec& spec) {
  ChannelLayout layout;
  const int w = std::max(1, spec.channel_width);
  const int jog = std::max(1, n / 10);
  for (int ch = 0; ch < spec.random_channels; ++ch) {
    ChannelPolyline line;
    line.width = w;
    int row = draw(rng, w, std::max(w, n - 2 * w));
    line.vertices.emplace_back(row, 0);
    const int bends = draw(rng, 1, 3);
    std::vector<int> cols;
    for (int b = 0; b < bends; ++b) cols.push_back(draw(rng, n / 8, n - n / 8 - 1));
    std::sort(cols.begin(), cols.end());
    for (const int col : cols) {
      line.vertices.emplace_back(row, col);
      row = std::clamp(row + draw(rng, -jog, jog), 0, n - w);
      line.vertices.emplace_back(row, col);
    }
    line.vertices.emplace_back(row, n - 1);
    layout.lines.push_back(std::move(line));
  }
  return layout;
}

ChannelLayout random_short_channels(std::mt19937_64& rng, int n, const ChannelsSpec& spec) {
  ChannelLayout layout;
  const int w = std::max(1, spec.channel_width);
  for (int ch = 0; ch < spec.random_channels; ++ch) {
    const int len = draw(rng, n / 4, n / 2);
    const int col = draw(rng, 0, n - w);
    const int row = draw(rng, 0, n - len);
    layout.lines.push_back({{{row, col}, {row + len - 1, col}}, w});
  }
  const int lo = std::max(1, n / 32);
  const int hi = std::max(lo, n / 12);
  for (int inc = 0; inc < spec.random_inclusions; ++inc) {
    const int height = draw(rng, lo, hi);
    const int width = draw(rng, lo, hi);
    const int row = draw(rng, 0, n - height);
    const int col = draw(rng, 0, n - width);
    layout.rects.push_back({row, col, row + height, col + width});
  }
  return layout;
}

std::vector<double> two_valued(const std::vector<std::uint8_t>& mask, double contrast,
                               const char* name) {
  if (std::all_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; })) {
    throw InputError(std::string("channel layout for ") + name + " leaves no background cells");
  }
  std::vector<double> values(mask.size());
  std::transform(mask.begin(), mask.end(), values.begin(),
                 [contrast](std::uint8_t m) { return m ? contrast : 1.0; });
  return values;
}

}  // namespace

std::vector<std::uint8_t> rasterize(const ChannelLayout& layout, int n) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n, 0);
  for (const auto& rect : layout.rects) paint(mask, n, rect.row0, rect.col0, rect.row1, rect.col1);
  for (const auto& line : layout.lines) {
    const int w = std::max(1, line.width);
    for (std::size_t v = 0; v < line.vertices.size(); ++v) {
      const auto [r0, c0] = line.vertices[v];
      const auto [r1, c1] = v + 1 < line.vertices.size() ? line.vertices[v + 1] : line.vertices[v];
      if (r0 != r1 && c0 != c1) {
        throw InputError("channel polyline segments must be axis-aligned");
      }
      paint(mask, n, std::min(r0, r1), std::min(c0, c1), std::max(r0, r1) + w,
            std::max(c0, c1) + w);
    }
  }
  return mask;
}

MediaField generate_channelized(const GridPair& grid, double contrast, std::uint64_t seed,
                                const ChannelsSpec& spec) {
  if (!(contrast >= 1.0) || !std::isfinite(contrast)) {
    throw InputError("contrast must be a finite value >= 1");
  }
  const int n = grid.n_fine();
  MediaField field = uniform_media(grid);
  if (contrast == 1.0) return field;

  std::mt19937_64 rng1(seed);
  std::mt19937_64 rng2(seed ^ 0x9e3779b97f4a7c15ULL);
  const ChannelLayout layout1 = spec.kappa1.empty() ? random_long_channels(rng1, n, spec) : spec.kappa1;
  const ChannelLayout layout2 = spec.kappa2.empty() ? random_short_channels(rng2, n, spec) : spec.kappa2;
  field.kappa1 = two_valued(rasterize(layout1, n), contrast, "kappa1");
  field.kappa2 = two_valued(rasterize(layout2, n), contrast, "kappa2");
  field.validate();
  return field;
}

void write_matrix(std::ostream& out, const std::vector<double>& values, int rows, int cols) {
  out << rows << ' ' << cols << '\n';
  char buf[64];
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, values[static_cast<std::size_t>(r) * cols + c]);
      if (c) out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

std::vector<double> read_matrix(std::istream& in, int rows, int cols, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(what + ": missing header line");
  std::istringstream header(line);
  int file_rows = 0, file_cols = 0;
  if (!(header >> file_rows >> file_cols)) throw InputError(what + ": malformed header '" + line + "'");
  if (file_rows != rows || file_cols != cols) {
    throw InputError(what + ": dimension mismatch, file is " + std::to_string(file_rows) + "x" +
                     std::to_string(file_cols) + " but grid needs " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw InputError(what + ": missing row " + std::to_string(r));
    const char* p = line.data();
    const char* end = line.data() + line.size();
    int count = 0;
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) {
        throw InputError(what + ": malformed value in row " + std::to_string(r));
      }
      values.push_back(v);
      p = res.ptr;
      ++count;
    }
    if (count != cols) {
      throw InputError(what + ": row " + std::to_string(r) + " has " + std::to_string(count) +
                       " values, expected " + std::to_string(cols));
    }
  }
  return values;
}

namespace {

constexpr const char* kFieldRoles[] = {"kappa1", "kappa2", "sigma", "c1", "c2"};

std::vector<double>& field_by_role(MediaField& field, const std::string& role) {
  if (role == "kappa1") return field.kappa1;
  if (role == "kappa2") return field.kappa2;
  if (role == "sigma") return field.sigma;
  if (role == "c1") return field.c1;
  if (role == "c2") return field.c2;
  throw InputError("unknown media role '" + role + "'");
}

}  // namespace

std::filesystem::path save_media(const MediaField& field, const std::filesystem::path& dir) {
  field.validate();
  std::filesystem::create_directories(dir);
  MediaField copy = field;
  std::ofstream manifest(dir / "manifest.txt");
  for (const char* role : kFieldRoles) {
    const std::string name = std::string(role) + ".txt";
    std::ofstream out(dir / name);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    write_matrix(out, field_by_role(copy, role), field.n, field.n);
    manifest << role << ' ' << name << '\n';
  }
  if (!manifest) throw InputError("cannot write " + (dir / "manifest.txt").string());
  return dir / "manifest.txt";
}

MediaField load_media(const std::filesystem::path& manifest_path, const GridPair& grid) {
  std::ifstream manifest(manifest_path);
  if (!manifest) throw InputError("cannot open media manifest " + manifest_path.string());
  std::map<std::string, std::filesystem::path> paths;
  std::string role, path;
  while (manifest >> role >> path) paths[role] = manifest_path.parent_path() / path;

  MediaField field;
  field.n = grid.n_fine();
  for (const char* r : kFieldRoles) {
    const auto it = paths.find(r);
    if (it == paths.end()) throw InputError(manifest_path.string() + ": missing entry for " + r);
    std::ifstream in(it->second);
    if (!in) throw InputError("cannot open media file " + it->second.string());
    field_by_role(field, r) = read_matrix(in, field.n, field.n, it->second.string());
  }
  field.validate();
  return field;
}

PartitionMode parse_partition_mode(const std::string& text) {
  if (text == "single") return PartitionMode::Single;
  if (text == "channelized") return PartitionMode::Channelized;
  throw InputError("unknown partition mode '" + text + "' (expected single or channelized)");
}

std::string to_string(PartitionMode mode) {
  return mode == PartitionMode::Single ? "single" : "channelized";
}

ContinuumPartition partition_continua(const GridPair& grid, const MediaField& field,
                                      PartitionMode mode, double threshold) {
  ContinuumPartition part;
  part.mode = mode;
  const int nf = grid.n_fine();
  const int refine = grid.refine();
  const int blocks = grid.num_coarse();
  for (int i = 0; i < 2; ++i) {
    auto& labels = part.labels[i];
    labels.assign(static_cast<std::size_t>(grid.num_fine()), -1);
    part.counts[i].assign(static_cast<std::size_t>(blocks), 1);
    part.cells[i].assign(static_cast<std::size_t>(blocks), {});

    if (mode == PartitionMode::Single) {
      std::fill(labels.begin(), labels.end(), 0);
      for (auto& c : part.cells[i]) c = {refine * refine};
      continue;
    }

    const auto& kappa = field.kappa(i);
    const double cut = threshold > 0.0 ? threshold : std::sqrt(field.kappa_min(i) * field.kappa_max(i));
    std::vector<int> stack;
    for (int j = 0; j < blocks; ++j) {
      const int r0 = (j / grid.n_coarse()) * refine;
      const int c0 = (j % grid.n_coarse()) * refine;
      int next = 0;
      int matrix_label = -1;
      auto& sizes = part.cells[i][j];
      for (int r = r0; r < r0 + refine; ++r) {
        for (int c = c0; c < c0 + refine; ++c) {
          const int k = r * nf + c;
          if (labels[k] >= 0) continue;
          if (kappa[k] < cut) {
            if (matrix_label < 0) {
              matrix_label = next++;
              sizes.push_back(0);
            }
            labels[k] = matrix_label;
            ++sizes[matrix_label];
            continue;
          }
          const int label = next++;
          sizes.push_back(0);
          labels[k] = label;
          stack.assign(1, k);
          while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            ++sizes[label];
            const int cr = cur / nf;
            const int cc = cur % nf;
            const int nbr[4][2] = {{cr - 1, cc}, {cr + 1, cc}, {cr, cc - 1}, {cr, cc + 1}};
            for (const auto& [nr, nc] : nbr) {
              if (nr < r0 || nr >= r0 + refine || nc < c0 || nc >= c0 + refine) continue;
              const int nk = nr * nf + nc;
              if (labels[nk] < 0 && kappa[nk] >= cut) {
                labels[nk] = label;
                stack.push_back(nk);
              }
            }
          }
        }
      }
      part.counts[i][j] = next;
    }
  }
  return part;
}

}  // namespace nlmc
