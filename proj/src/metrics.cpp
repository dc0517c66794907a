#include "nlmc/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>

#include "nlmc/errors.hpp"

namespace nlmc {

CoarseAverages coarse_average(const GridPair& grid, const GridFunction& v) {
  if (v.num_cells() != grid.num_fine()) throw InputError("coarse_average: shape mismatch");
  const int blocks = grid.num_coarse();
  const double per_block = static_cast<double>(grid.refine()) * grid.refine();
  CoarseAverages avg;
  for (int i = 0; i < 2; ++i) {
    auto& out = avg.values[i];
    out.assign(static_cast<std::size_t>(blocks), 0.0);
    for (int k = 0; k < grid.num_fine(); ++k) out[grid.coarse_of_fine(k)] += v.at(i, k);
    for (auto& x : out) x /= per_block;
  }
  return avg;
}

RelativeError relative_l2_error(const CoarseAverages& reference, const CoarseAverages& approx) {
  RelativeError err;
  for (int i = 0; i < 2; ++i) {
    const auto& ref = reference.values[i];
    const auto& app = approx.values[i];
    if (ref.size() != app.size()) throw InputError("relative_l2_error: block counts differ");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      num += (ref[k] - app[k]) * (ref[k] - app[k]);
      den += ref[k] * ref[k];
    }
    if (num == 0.0) {
      err[i] = 0.0;
    } else if (den > 0.0) {
      err[i] = std::sqrt(num / den);
    }
  }
  return err;
}

std::vector<double> block_energies(const GridPair& grid, const MediaField& field,
                                   const GridFunction& v) {
  if (v.num_cells() != grid.num_fine()) throw InputError("block_energies: shape mismatch");
  const int nf = grid.n_fine();
  const double h2 = grid.fine_area();
  std::vector<double> e(static_cast<std::size_t>(grid.num_coarse()), 0.0);
  const FaceList faces = face_list(nf, nf);
  for (int i = 0; i < 2; ++i) {
    const auto& kappa = field.kappa(i);
    for (const auto& f : faces.interior) {
      const double k1 = kappa[f.first], k2 = kappa[f.second];
      const double d = v.at(i, f.first) - v.at(i, f.second);
      const double term = 2.0 * k1 * k2 / (k1 + k2) * d * d;
      const int b1 = grid.coarse_of_fine(f.first);
      const int b2 = grid.coarse_of_fine(f.second);
      if (b1 == b2) {
        e[b1] += term;
      } else {
        e[b1] += 0.5 * term;
        e[b2] += 0.5 * term;
      }
    }
    for (const auto& f : faces.boundary) {
      const double x = v.at(i, f.cell);
      e[grid.coarse_of_fine(f.cell)] += 2.0 * kappa[f.cell] * x * x;
    }
  }
  for (int k = 0; k < grid.num_fine(); ++k) {
    const double d = v.at(0, k) - v.at(1, k);
    e[grid.coarse_of_fine(k)] += field.sigma[k] * h2 * d * d;
  }
  return e;
}

double energy_tail(const GridPair& grid, const MediaField& field, const GridFunction& v,
                   const OversampleRegion* excluded) {
  const auto e = block_energies(grid, field, v);
  double tail = 0.0;
  for (int j = 0; j < grid.num_coarse(); ++j) {
    if (excluded && excluded->contains_coarse(j / grid.n_coarse(), j % grid.n_coarse())) continue;
    tail += e[j];
  }
  return tail;
}

std::string format_percent(const std::optional<double>& value) {
  if (!value) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", *value * 100.0);
  return buf;
}

void write_error_csv(std::ostream& out, const std::vector<ErrorReport>& rows, bool with_area_ratio) {
  out << "H,m" << (with_area_ratio ? ",area_ratio_percent" : "") << ",e1_percent,e2_percent\n";
  char buf[64];
  for (const auto& r : rows) {
    out << "1/" << r.n_coarse << ',' << r.layers;
    if (with_area_ratio) {
      std::snprintf(buf, sizeof buf, "%.2f", r.area_ratio * 100.0);
      out << ',' << buf;
    }
    out << ',' << format_percent(r.error[0]) << ',' << format_percent(r.error[1]) << '\n';
  }
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string media_hash(const MediaField& field) {
  std::string bytes;
  for (const auto* values : {&field.kappa1, &field.kappa2, &field.sigma, &field.c1, &field.c2}) {
    bytes.append(reinterpret_cast<const char*>(values->data()), values->size() * sizeof(double));
  }
  return content_hash(bytes);
}

}  // namespace nlmc
