#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "lindblad/analysis.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/kernels.hpp"

namespace lindblad {

namespace {

double distance(const BlochVector& a, const BlochVector& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

BlochVector midpoint(const BlochVector& a, const BlochVector& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * (a.z + b.z)};
}

std::string describe(const BlochVector& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
  return os.str();
}

/// One-to-one matching by ascending distance; result[j] is the index in
/// `from` matched to to[j], or -1.
std::vector<int> match(const std::vector<FixedPoint>& from, const std::vector<FixedPoint>& to, double radius) {
  std::vector<std::tuple<double, int, int>> pairs;
  for (int i = 0; i < static_cast<int>(from.size()); ++i) {
    for (int j = 0; j < static_cast<int>(to.size()); ++j) {
      const double d = distance(from[static_cast<std::size_t>(i)].location, to[static_cast<std::size_t>(j)].location);
      if (d <= radius) pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> to_from(to.size(), -1);
  std::vector<bool> used(from.size(), false);
  for (const auto& [d, i, j] : pairs) {
    if (used[static_cast<std::size_t>(i)] || to_from[static_cast<std::size_t>(j)] != -1) continue;
    used[static_cast<std::size_t>(i)] = true;
    to_from[static_cast<std::size_t>(j)] = i;
  }
  return to_from;
}

/// Real part of the complex pair with the largest imaginary part, if any.
std::optional<double> oscillatory_real_part(const FixedPoint& fp) {
  double radius = 0.0;
  for (const auto& e : fp.eigenvalues) radius = std::max(radius, std::abs(e));
  const double tol = 1e-8 * std::max(1.0, radius);
  std::optional<double> re;
  double best_imag = tol;
  for (const auto& e : fp.eigenvalues) {
    if (e.imag() > best_imag) {
      best_imag = e.imag();
      re = e.real();
    }
  }
  return re;
}

bool is_regular(const std::vector<FixedPoint>& points) {
  return std::none_of(points.begin(), points.end(),
                      [](const FixedPoint& p) { return p.stability == StabilityClass::Marginal; });
}

struct Persisting {
  int before;
  int after;
  bool flipped;
  bool consumed{false};
};

/// Structural comparison of two hyperbolic fixed-point configurations.
std::vector<BifurcationEvent> compare(const std::vector<FixedPoint>& before, const std::vector<FixedPoint>& after,
                                      double link_radius, std::pair<double, double> bracket) {
  std::vector<BifurcationEvent> events;
  auto emit = [&](BifurcationKind kind, std::string details) {
    events.push_back({kind, bracket, std::move(details)});
  };

  const std::vector<int> link = match(before, after, link_radius);
  std::vector<Persisting> persisting;
  std::vector<int> born;
  std::vector<bool> survived(before.size(), false);
  for (int j = 0; j < static_cast<int>(after.size()); ++j) {
    const int i = link[static_cast<std::size_t>(j)];
    if (i < 0) {
      born.push_back(j);
      continue;
    }
    survived[static_cast<std::size_t>(i)] = true;
    const bool flipped = is_stable(before[static_cast<std::size_t>(i)].stability) !=
                         is_stable(after[static_cast<std::size_t>(j)].stability);
    persisting.push_back({i, j, flipped});
  }
  std::vector<int> died;
  for (int i = 0; i < static_cast<int>(before.size()); ++i) {
    if (!survived[static_cast<std::size_t>(i)]) died.push_back(i);
  }

  // Complex pair crossing the imaginary axis on a persisting branch.
  for (auto& p : persisting) {
    const auto re_before = oscillatory_real_part(before[static_cast<std::size_t>(p.before)]);
    const auto re_after = oscillatory_real_part(after[static_cast<std::size_t>(p.after)]);
    if (re_before && re_after && ((*re_before < 0.0) != (*re_after < 0.0))) {
      p.consumed = true;
      emit(BifurcationKind::Hopf, "complex pair crosses the imaginary axis at fixed point " +
                                      describe(after[static_cast<std::size_t>(p.after)].location));
    }
  }

  // Nearest unconsumed persisting branch (measured on the given side) that changed stability.
  auto flipped_neighbour = [&](const BlochVector& near, bool on_after_side) -> Persisting* {
    Persisting* best = nullptr;
    double best_d = 0.0;
    for (auto& p : persisting) {
      const auto& loc = on_after_side ? after[static_cast<std::size_t>(p.after)].location
                                      : before[static_cast<std::size_t>(p.before)].location;
      const double d = distance(loc, near);
      if (best == nullptr || d < best_d) {
        best = &p;
        best_d = d;
      }
    }
    return (best != nullptr && best->flipped && !best->consumed) ? best : nullptr;
  };

  auto classify_group = [&](const std::vector<int>& group, const std::vector<FixedPoint>& side,
                            bool on_after_side, const char* verb) {
    if (group.empty()) return;
    if (group.size() == 1) {
      const FixedPoint& p = side[static_cast<std::size_t>(group[0])];
      if (Persisting* n = flipped_neighbour(p.location, on_after_side)) {
        n->consumed = true;
        emit(BifurcationKind::Transcritical,
             std::string("fixed point ") + verb + " at " + describe(p.location) + " exchanging stability");
      } else {
        emit(BifurcationKind::Unclassified, std::string("single fixed point ") + verb + " at " + describe(p.location));
      }
      return;
    }
    if (group.size() == 2) {
      const FixedPoint& a = side[static_cast<std::size_t>(group[0])];
      const FixedPoint& b = side[static_cast<std::size_t>(group[1])];
      const std::string where = describe(a.location) + " and " + describe(b.location);
      if (is_stable(a.stability) != is_stable(b.stability)) {
        emit(BifurcationKind::SaddleNode, std::string("stable/unstable pair ") + verb + " at " + where);
      } else if (Persisting* n = flipped_neighbour(midpoint(a.location, b.location), on_after_side)) {
        n->consumed = true;
        emit(BifurcationKind::Pitchfork, std::string("symmetric pair ") + verb + " at " + where);
      } else {
        emit(BifurcationKind::Unclassified, std::string("pair ") + verb + " at " + where);
      }
      return;
    }
    emit(BifurcationKind::Unclassified, std::to_string(group.size()) + " fixed points " + verb);
  };

  classify_group(born, after, true, "appeared");
  classify_group(died, before, false, "vanished");

  // Two persisting branches exchanging stability.
  std::vector<Persisting*> lost;
  std::vector<Persisting*> gained;
  for (auto& p : persisting) {
    if (!p.flipped || p.consumed) continue;
    (is_stable(before[static_cast<std::size_t>(p.before)].stability) ? lost : gained).push_back(&p);
  }
  const std::size_t pairs = std::min(lost.size(), gained.size());
  for (std::size_t k = 0; k < pairs; ++k) {
    lost[k]->consumed = gained[k]->consumed = true;
    emit(BifurcationKind::Transcritical,
         "branches at " + describe(after[static_cast<std::size_t>(lost[k]->after)].location) + " and " +
             describe(after[static_cast<std::size_t>(gained[k]->after)].location) + " exchange stability");
  }
  for (auto& p : persisting) {
    if (p.flipped && !p.consumed) {
      emit(BifurcationKind::Unclassified,
           "stability change at " + describe(after[static_cast<std::size_t>(p.after)].location));
    }
  }
  return events;
}

}  // namespace

std::string_view to_string(BifurcationKind k) noexcept {
  switch (k) {
    case BifurcationKind::SaddleNode: return "SaddleNode";
    case BifurcationKind::Pitchfork: return "Pitchfork";
    case BifurcationKind::Transcritical: return "Transcritical";
    case BifurcationKind::Hopf: return "Hopf";
    case BifurcationKind::Unclassified: return "Unclassified";
  }
  return "Unknown";
}

double saddle_node_critical_b(double t) {
  if (!(t < 0.0)) throw DomainError("saddle-node critical b needs t < 0");
  return 2.0 * std::pow(-t / 3.0, 1.5);
}

SweepResult sweep(const SweepSpec& spec, Exec exec) {
  if (spec.n_steps < 1) throw DomainError("sweep needs n_steps >= 1");
  SweepResult result;
  result.param_name = spec.param;

  std::vector<ModelSpec> models;
  for (int k = 0; k < spec.n_steps; ++k) {
    const double value =
        spec.n_steps == 1 ? spec.from : spec.from + (spec.to - spec.from) * k / (spec.n_steps - 1);
    result.param_values.push_back(value);
    ModelSpec m = spec.base.with(spec.param, value);
    const ValidationReport report = validate_params(m);
    if (!report.ok()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "sweep value " << spec.param << " = " << value << " is invalid:";
      for (const auto& v : report.violations) msg << " " << v << ";";
      throw InvalidParams(msg.str());
    }
    models.push_back(std::move(m));
  }

  const auto points = exec == Exec::parallel ? kernels::fixed_points_over(models, spec.fixed_points)
                                             : kernels::serial::fixed_points_over(models, spec.fixed_points);

  // Branch identities by nearest-neighbour continuation between adjacent values.
  int next_id = 0;
  std::vector<int> previous_ids;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::vector<int> ids(points[k].size(), -1);
    if (k > 0) {
      const auto link = match(points[k - 1], points[k], spec.link_radius);
      for (std::size_t j = 0; j < ids.size(); ++j) {
        if (link[j] >= 0) ids[j] = previous_ids[static_cast<std::size_t>(link[j])];
      }
    }
    std::vector<BranchPoint> row;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (ids[j] < 0) ids[j] = next_id++;
      row.push_back({points[k][j], ids[j]});
    }
    result.branches.push_back(std::move(row));
    previous_ids = std::move(ids);
  }

  // Events between consecutive hyperbolic configurations. A run of sampled
  // values with a non-hyperbolic fixed point is itself the bracket.
  std::vector<std::size_t> regular;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (is_regular(points[k])) regular.push_back(k);
  }
  const auto& p = result.param_values;
  for (std::size_t r = 1; r < regular.size(); ++r) {
    const std::size_t a = regular[r - 1];
    const std::size_t b = regular[r];
    const double lo = b == a + 1 ? p[a] : p[a + 1];
    const double hi = b == a + 1 ? p[b] : p[b - 1];
    auto found = compare(points[a], points[b], spec.link_radius, {std::min(lo, hi), std::max(lo, hi)});
    result.events.insert(result.events.end(), found.begin(), found.end());
  }
  return result;
}

}  // namespace lindblad
