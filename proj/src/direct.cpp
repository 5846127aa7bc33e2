#include "rank1/direct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "rank1/assignment.hpp"
#include "rank1/error.hpp"

namespace rank1 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IsolationContext {
  const CharacteristicFunction& cf;
  const DirectOptions& options;

  RefineOptions refine(double max_step, bool confirm) const {
    RefineOptions r;
    r.tol = options.tol;
    r.cluster_tol = options.cluster_tol;
    r.max_step = max_step;
    r.confirm_order = confirm;
    r.quadrature_points = options.quadrature_points;
    r.max_quadrature_points = options.max_quadrature_points;
    return r;
  }

  // Certified zero count of a region, or nullopt.
  std::optional<int> count(const Region& region) const {
    try {
      const WindingResult w =
          winding_with_escalation(cf, region, options.quadrature_points, options.max_quadrature_points);
      if (!w.certified) return std::nullopt;
      return w.zeros();
    } catch (const SpectralError& e) {
      if (e.kind() == ErrorKind::ContourThroughSingularity) return std::nullopt;
      throw;
    }
  }

  std::optional<RefinedZero> try_refine(cplx seed, int order, double max_step) const {
    try {
      return refine_zero(cf, seed, order, refine(max_step, false));
    } catch (const SpectralError& e) {
      if (e.kind() == ErrorKind::NoConvergence) return std::nullopt;
      throw;
    }
  }
};

bool accept_directly(const IsolationContext& ctx, const RectRegion& box, int zeros,
                     std::vector<LocatedZero>& out) {
  const double diameter = box.diameter();
  if (zeros == 1) {
    std::vector<cplx> seeds{box.center()};
    if (box.y0 < 0.0 && box.y1 > 0.0) {
      for (const Pole& p : ctx.cf.poles_between(box.x0, box.x1)) {
        if (seeds.size() >= 5) break;
        seeds.push_back(p.lambda + p.c);
      }
    }
    for (cplx seed : seeds) {
      if (!box.contains(seed)) continue;
      const auto z = ctx.try_refine(seed, 1, diameter);
      if (z && box.contains(z->location)) {
        out.push_back({z->location, 1, z->residual});
        return true;
      }
    }
    return false;
  }
  if (diameter > 0.5 * ctx.cf.gap()) return false;
  const auto z = ctx.try_refine(box.center(), zeros, diameter);
  if (!z || !box.contains(z->location)) return false;
  const DiskRegion disk{z->location, cluster_radius(ctx.cf, z->location, zeros, ctx.options.cluster_tol)};
  if (!box.contains(disk)) return false;
  const auto n = ctx.count(disk);
  if (!n || *n != zeros) return false;
  out.push_back({z->location, zeros, z->residual});
  return true;
}

std::vector<double> vertical_cuts(const CharacteristicFunction& cf, const RectRegion& box) {
  const double width = box.x1 - box.x0;
  const double cx = 0.5 * (box.x0 + box.x1);
  const bool straddles = box.y0 < 0.0 && box.y1 > 0.0;
  std::vector<double> cuts;
  if (straddles) {
    const auto poles = cf.poles_between(box.x0, box.x1);
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < poles.size(); ++i) mids.push_back(0.5 * (poles[i].lambda + poles[i + 1].lambda));
    std::sort(mids.begin(), mids.end(),
              [cx](double a, double b) { return std::abs(a - cx) < std::abs(b - cx); });
    for (std::size_t i = 0; i < mids.size() && i < 2; ++i) cuts.push_back(mids[i]);
  }
  for (double f : {0.5, 0.37, 0.63, 0.29, 0.71}) {
    const double x = box.x0 + f * width;
    if (straddles && cf.distance_to_nearest_pole(cplx(x, 0.0)) < std::max(0.02 * width, 1e-7)) continue;
    cuts.push_back(x);
  }
  return cuts;
}

std::vector<double> horizontal_cuts(const RectRegion& box) {
  const double height = box.y1 - box.y0;
  std::vector<double> cuts;
  for (double f : {0.5, 0.37, 0.63, 0.29, 0.71}) {
    const double y = box.y0 + f * height;
    if (box.y0 < 0.0 && box.y1 > 0.0 && std::abs(y) < std::max(0.02 * height, 1e-7)) continue;
    cuts.push_back(y);
  }
  return cuts;
}

void isolate(const IsolationContext& ctx, const RectRegion& box, int zeros, std::vector<LocatedZero>& out,
             int depth) {
  if (zeros <= 0) return;
  if (accept_directly(ctx, box, zeros, out)) return;
  const double scale = std::max(1.0, std::abs(box.center()));
  if (depth > 200 || box.diameter() < 1e-13 * scale)
    fail(ErrorKind::CertificationFailed, "zero isolation did not terminate near (" +
                                             std::to_string(box.center().real()) + ", " +
                                             std::to_string(box.center().imag()) + ")");

  const std::vector<double> xs = vertical_cuts(ctx.cf, box);
  const std::vector<double> ys = horizontal_cuts(box);
  std::vector<std::pair<std::size_t, std::size_t>> combos;
  for (std::size_t s = 0; s < xs.size() + ys.size(); ++s)
    for (std::size_t i = 0; i <= s; ++i)
      if (i < xs.size() && s - i < ys.size()) combos.emplace_back(i, s - i);
  if (combos.size() > 10) combos.resize(10);

  for (auto [i, j] : combos) {
    const double x = xs[i];
    const double y = ys[j];
    const std::array<RectRegion, 4> parts = {RectRegion{box.x0, x, box.y0, y}, RectRegion{x, box.x1, box.y0, y},
                                             RectRegion{box.x0, x, y, box.y1}, RectRegion{x, box.x1, y, box.y1}};
    std::array<int, 4> counts{};
    bool ok = true;
    int total = 0;
    for (std::size_t p = 0; p < 4 && ok; ++p) {
      const auto c = ctx.count(parts[p]);
      if (!c || *c < 0) {
        ok = false;
        break;
      }
      counts[p] = *c;
      total += *c;
    }
    if (!ok || total != zeros) continue;
    for (std::size_t p = 0; p < 4; ++p) isolate(ctx, parts[p], counts[p], out, depth + 1);
    return;
  }
  fail(ErrorKind::CertificationFailed, "no certified subdivision of the box around (" +
                                           std::to_string(box.center().real()) + ", " +
                                           std::to_string(box.center().imag()) + ")");
}

ZeroReport process_disk(const IsolationContext& ctx, Index k) {
  const double d = ctx.cf.gap();
  const double lambda = ctx.cf.lambda(k);
  ZeroReport report;
  report.kind = RegionKind::Disk;
  report.index = k;
  bool found = false;
  for (double radius : {0.5 * d, 0.5 * d - d / 200.0, 0.5 * d - d / 100.0}) {
    const DiskRegion disk{cplx(lambda, 0.0), radius};
    try {
      WindingResult w =
          winding_with_escalation(ctx.cf, disk, ctx.options.quadrature_points, ctx.options.max_quadrature_points);
      report.region = disk;
      report.winding = w;
      if (w.certified) {
        found = true;
        break;
      }
    } catch (const SpectralError& e) {
      if (e.kind() != ErrorKind::ContourThroughSingularity) throw;
    }
  }
  if (!found) fail(ErrorKind::CertificationFailed, "disk around lambda_" + std::to_string(k) + " not certified");

  const DiskRegion disk = std::get<DiskRegion>(report.region);
  const int zeros = report.winding.zeros();
  if (zeros == 0) return report;
  if (zeros == 1) {
    std::vector<cplx> seeds{cplx(lambda, 0.0) + (ctx.cf.in_i1(k) ? ctx.cf.c(k) : cplx(0.0)),
                            cplx(lambda, 0.25 * disk.radius), cplx(lambda, -0.25 * disk.radius)};
    for (cplx seed : seeds) {
      if (std::abs(seed - disk.center) >= disk.radius) continue;
      const auto z = ctx.try_refine(seed, 1, 0.5 * disk.radius);
      if (z && std::abs(z->location - disk.center) < disk.radius) {
        report.zeros.push_back({z->location, 1, z->residual});
        return report;
      }
    }
  }
  // Fall back to subdividing the bounding square and keeping zeros inside the circle.
  const double r = disk.radius;
  const RectRegion square{lambda - r, lambda + r, -r, r};
  const auto square_count = ctx.count(square);
  if (!square_count) fail(ErrorKind::CertificationFailed, "square around lambda_" + std::to_string(k) + " not certified");
  std::vector<LocatedZero> found_zeros;
  isolate(ctx, square, *square_count, found_zeros, 0);
  int inside = 0;
  for (const LocatedZero& z : found_zeros) {
    if (std::abs(z.location - disk.center) < r) {
      report.zeros.push_back(z);
      inside += z.order;
    }
  }
  if (inside != zeros)
    fail(ErrorKind::CertificationFailed, "zeros in the disk around lambda_" + std::to_string(k) + " not located");
  return report;
}

struct Plan {
  double eps;
  Index k_eps;
  Index k_prime;
  Index window;
};

Plan make_plan(const CharacteristicFunction& cf, const DirectOptions& options) {
  const double d = cf.gap();
  Plan plan{};
  plan.eps = options.eps.value_or(d / (2.0 + d));
  if (options.central_radius) {
    if (*options.central_radius < 0) fail(ErrorKind::InvalidArgument, "central radius must be non-negative");
    plan.k_prime = *options.central_radius;
    try {
      plan.k_eps = cf.compute_keps(plan.eps).first;
    } catch (const SpectralError& e) {
      if (e.kind() != ErrorKind::NonSummable) throw;
      plan.k_eps = 0;
    }
    plan.k_eps = std::clamp<Index>(plan.k_eps, 0, std::max<Index>(plan.k_prime - 1, 0));
  } else {
    std::tie(plan.k_eps, plan.k_prime) = cf.compute_keps(plan.eps);
  }
  const Index requested = options.window.value_or(std::max(cf.coefficients().extent, plan.k_prime));
  if (requested < 0) fail(ErrorKind::InvalidArgument, "window must be non-negative");
  plan.window = std::max(requested, plan.k_prime);
  return plan;
}

RectRegion central_rectangle(const CharacteristicFunction& cf, const Plan& plan) {
  const double d = cf.gap();
  const double reach = static_cast<double>(plan.k_prime - plan.k_eps) * d;
  RectRegion r;
  r.x1 = cf.lambda(plan.k_prime) + 0.5 * d;
  if (cf.spec().index_set == IndexSet::Integers)
    r.x0 = cf.lambda(-plan.k_prime) - 0.5 * d;
  else
    r.x0 = std::min(-cf.lambda(plan.k_prime), cf.lambda(0) - reach) - 0.5 * d;
  r.y1 = reach + 0.5 * d;
  r.y0 = -r.y1;
  return r;
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

int worker_threads(const DirectOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("RANK1_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Localization localize_spectrum(const CharacteristicFunction& cf, const DirectOptions& options) {
  const Plan plan = make_plan(cf, options);
  if (plan.window > cf.explicit_radius())
    fail(ErrorKind::WindowExceeded, "window " + std::to_string(plan.window) + " exceeds the truncation radius " +
                                        std::to_string(cf.explicit_radius()));
  Localization loc;
  loc.eps = plan.eps;
  loc.k_eps = plan.k_eps;
  loc.k_eps_prime = plan.k_prime;
  loc.window = plan.window;
  loc.truncation = cf.truncation();
  loc.central = central_rectangle(cf, plan);

  const IsolationContext ctx{cf, options};
  ZeroReport central;
  central.kind = RegionKind::Central;
  central.region = loc.central;
  central.winding =
      winding_with_escalation(cf, loc.central, options.quadrature_points, options.max_quadrature_points);
  if (!central.winding.certified) fail(ErrorKind::CertificationFailed, "central rectangle not certified");
  isolate(ctx, loc.central, central.winding.zeros(), central.zeros, 0);

  std::vector<Index> disk_indices;
  const Window w = window(cf.spec().index_set, plan.window);
  for (Index k = w.lo; k <= w.hi; ++k)
    if (radius_of(k) > plan.k_prime) disk_indices.push_back(k);
  std::vector<ZeroReport> disks(disk_indices.size());
  parallel_for(disk_indices.size(), worker_threads(options),
               [&](std::size_t i) { disks[i] = process_disk(ctx, disk_indices[i]); });

  loc.reports.push_back(std::move(central));
  for (ZeroReport& r : disks) loc.reports.push_back(std::move(r));
  loc.certified = std::all_of(loc.reports.begin(), loc.reports.end(),
                              [](const ZeroReport& r) { return r.winding.certified; });
  return loc;
}

Localization localize_spectrum(const BaseSpectrum& spec, const ValidatedCoefficients& coeffs,
                               const DirectOptions& options) {
  Index truncation = options.truncation;
  {
    const CharacteristicFunction probe(spec, coeffs, 0);
    truncation = std::max(truncation, 4 * make_plan(probe, options).window);
  }
  for (int attempt = 0;; ++attempt) {
    const CharacteristicFunction cf(spec, coeffs, truncation);
    try {
      return localize_spectrum(cf, options);
    } catch (const SpectralError& e) {
      if (e.kind() != ErrorKind::CertificationFailed || attempt >= options.max_truncation_doublings) throw;
    }
    truncation *= 2;
  }
}

PerturbedSpectrum assemble_spectrum(const CharacteristicFunction& cf, const Localization& loc,
                                    const DirectOptions& options) {
  const BaseSpectrum& spec = cf.spec();
  const double d = cf.gap();
  const Window w = window(spec.index_set, loc.window);

  // sigma_0 inside the window, in increasing order of lambda.
  std::vector<Index> i0;
  for (Index n = w.lo; n <= w.hi; ++n)
    if (!cf.in_i1(n)) i0.push_back(n);
  const double coincidence = options.cluster_tol * d;
  const auto coincident_i0 = [&](cplx z) -> std::optional<Index> {
    auto it = std::lower_bound(i0.begin(), i0.end(), z.real(),
                               [&](Index n, double x) { return spec.lambda(n) < x; });
    std::optional<Index> best;
    double best_dist = coincidence;
    for (auto j : {it, it == i0.begin() ? it : std::prev(it)}) {
      if (j == i0.end()) continue;
      const double dist = std::abs(z - spec.lambda(*j));
      if (dist <= best_dist) {
        best_dist = dist;
        best = *j;
      }
    }
    return best;
  };

  std::map<Index, int> extra_order;  // l_n for n in I0
  struct Copy {
    cplx mu;
    int multiplicity;
    Origin origin;
    std::optional<Index> coincident;
  };
  std::vector<Copy> central_copies;
  std::vector<SpectrumEntry> entries;

  for (const ZeroReport& report : loc.reports) {
    if (report.kind == RegionKind::Central) {
      for (const LocatedZero& z : report.zeros) {
        const auto n = coincident_i0(z.location);
        if (n) extra_order[*n] += z.order;
        for (int j = 0; j < z.order; ++j)
          central_copies.push_back(n ? Copy{cplx(spec.lambda(*n), 0.0), 0, Origin::Both, n}
                                     : Copy{z.location, z.order, Origin::ZeroOfF, std::nullopt});
      }
      continue;
    }
    const Index k = report.index;
    const int expected = cf.in_i1(k) ? 1 : 0;
    int found = 0;
    for (const LocatedZero& z : report.zeros) found += z.order;
    if (found != expected || report.zero_count() != expected)
      fail(ErrorKind::CountMismatch, "disk around lambda_" + std::to_string(k) + " holds " +
                                         std::to_string(report.zero_count()) + " zeros, expected " +
                                         std::to_string(expected));
    if (expected == 1) {
      const cplx mu = report.zeros.front().location;
      entries.push_back({mu, 1, k, Origin::ZeroOfF, std::abs(mu - spec.lambda(k))});
    }
  }

  for (Index n : i0) {
    const auto it = extra_order.find(n);
    const int l = it == extra_order.end() ? 0 : it->second;
    entries.push_back({cplx(spec.lambda(n), 0.0), 1 + l, n, l > 0 ? Origin::Both : Origin::CommonWithA, 0.0});
  }

  std::vector<Index> central_i1;
  const Window cw = window(spec.index_set, loc.k_eps_prime);
  for (Index n = cw.lo; n <= cw.hi; ++n)
    if (cf.in_i1(n)) central_i1.push_back(n);
  if (central_i1.size() != central_copies.size())
    fail(ErrorKind::CountMismatch, "central rectangle holds " + std::to_string(central_copies.size()) +
                                       " zeros of F but " + std::to_string(central_i1.size()) + " poles");
  const int m = static_cast<int>(central_i1.size());
  std::vector<double> cost(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      cost[static_cast<std::size_t>(i) * m + j] =
          std::abs(central_copies[static_cast<std::size_t>(i)].mu - spec.lambda(central_i1[static_cast<std::size_t>(j)]));
  const std::vector<int> match = min_cost_assignment(cost, m);
  for (int i = 0; i < m; ++i) {
    const Copy& c = central_copies[static_cast<std::size_t>(i)];
    const Index n = central_i1[static_cast<std::size_t>(match[static_cast<std::size_t>(i)])];
    const int mult = c.coincident ? 1 + extra_order[*c.coincident] : c.multiplicity;
    entries.push_back({c.mu, mult, n, c.origin, std::abs(c.mu - spec.lambda(n))});
  }

  std::sort(entries.begin(), entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.paired_index < b.paired_index; });

  PerturbedSpectrum out;
  out.entries = std::move(entries);
  out.offset_sum = 0.0;
  for (const SpectrumEntry& e : out.entries) out.offset_sum += e.offset;
  out.certified = loc.certified;

  const double tail = cf.tail_sum(loc.window);
  if (tail == 0.0) {
    out.tail_bound = 0.0;
  } else {
    out.tail_bound = kInf;
    const double eps_cert = 0.9 * d / (d + 4.0);
    try {
      const auto [k, k_prime] = cf.compute_keps(eps_cert);
      (void)k;
      if (loc.window >= k_prime && std::isfinite(tail)) out.tail_bound = d / (2.0 * eps_cert) * tail;
    } catch (const SpectralError& e) {
      if (e.kind() != ErrorKind::NonSummable) throw;
    }
  }
  return out;
}

DirectResult solve_direct(const BaseSpectrum& spec, const PerturbationCoefficients& coeffs,
                          const DirectOptions& options) {
  const BaseSpectrum base = validate_base(spec);
  ValidationOptions vopts;
  vopts.allow_nonsummable = options.allow_nonsummable;
  const ValidatedCoefficients validated = validate_coefficients(coeffs, base, vopts);

  Localization loc = localize_spectrum(base, validated, options);
  const CharacteristicFunction cf(base, validated, loc.truncation);
  DirectResult result;
  result.spectrum = assemble_spectrum(cf, loc, options);
  result.localization = std::move(loc);
  return result;
}

}  // namespace rank1
