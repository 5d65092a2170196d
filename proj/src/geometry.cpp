#include "sieve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sieve {

namespace {

double sup_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, x);
  return s;
}

// Default guard radius for explicit hole lists: half the minimal center
// spacing, capped so the disk stays well inside the strip |y| < H.
double default_guard_radius(const Domain2D& domain,
                            const std::vector<Hole>& holes, std::size_t k) {
  double cap = 0.5 * std::min(1.0, 0.5 * domain.H);
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < holes.size(); ++l) {
    if (l == k) continue;
    spacing = std::min(spacing, std::abs(holes[k].center - holes[l].center));
  }
  if (!std::isfinite(spacing)) return cap;
  return std::min(0.5 * spacing, cap);
}

void throw_if_invalid(const SieveConfig& config) {
  ValidationReport report = validate_assumptions(config);
  if (!report.ok()) throw std::invalid_argument(report.summary());
}

}  // namespace

double RateParams::sup_gamma() const { return sup_of(gamma_k); }
double RateParams::sup_eta() const { return sup_of(eta_k); }

bool ValidationReport::ok() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (!first) os << "; ";
    first = false;
    os << c.check;
    if (!c.detail.empty()) os << ": " << c.detail;
  }
  if (first) os << "all checks pass";
  return os.str();
}

const ValidationIssue* ValidationReport::find(const std::string& check) const {
  for (const auto& c : checks)
    if (c.check == check) return &c;
  return nullptr;
}

SieveConfig make_periodic_config(const Domain2D& domain, double eps,
                                 const std::function<double(double)>& d_of_eps,
                                 const std::function<double(double)>& gamma_fn) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  SieveConfig config;
  config.domain = domain;
  config.eps = eps;
  config.gamma_fn = gamma_fn;
  config.n = 2;
  double d = d_of_eps ? d_of_eps(eps) : 0.0;
  if (d < 0.0) throw std::invalid_argument("d_of_eps produced a negative width");
  int count = static_cast<int>(std::floor(domain.L / eps + 1e-12));
  for (int k = 0; k < count; ++k) {
    Hole hole;
    hole.center = (k + 0.5) * eps;
    hole.half_width = d;
    hole.guard_radius = 0.5 * eps;
    config.holes.push_back(hole);
  }
  config.degenerate = (d == 0.0);
  throw_if_invalid(config);
  return config;
}

SieveConfig make_explicit_config(const Domain2D& domain, double eps,
                                 std::vector<Hole> holes,
                                 const std::function<double(double)>& gamma_fn) {
  SieveConfig config;
  config.domain = domain;
  config.eps = eps;
  config.gamma_fn = gamma_fn;
  config.n = 2;
  config.holes = std::move(holes);
  for (std::size_t k = 0; k < config.holes.size(); ++k) {
    if (config.holes[k].guard_radius <= 0.0)
      config.holes[k].guard_radius = default_guard_radius(domain, config.holes, k);
  }
  bool all_zero = !config.holes.empty();
  for (const auto& h : config.holes)
    if (h.half_width > 0.0) all_zero = false;
  config.degenerate = all_zero;
  throw_if_invalid(config);
  return config;
}

SieveConfig make_regular_config(const Domain2D& domain,
                                const std::vector<GammaCell>& cells,
                                const std::function<double(double)>& gamma_fn,
                                int n, double alpha) {
  if (n < 3) throw std::invalid_argument("regular construction needs n >= 3");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  SieveConfig config;
  config.domain = domain;
  config.gamma_fn = gamma_fn;
  config.n = n;

  double eps = 0.0;
  for (const auto& cell : cells) eps = std::max(eps, cell.diam);
  config.eps = eps;

  // Cells must be disjoint along the lattice parameterization; the guard
  // disk of radius rho_k = diam/2 has to fit into its own cell.
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cells[a].center < cells[b].center;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const GammaCell& a = cells[order[i - 1]];
    const GammaCell& b = cells[order[i]];
    if (b.center - a.center < 0.5 * (a.diam + b.diam) - 1e-15 * eps)
      throw std::invalid_argument("cells overlap");
  }

  bool any_positive = false;
  for (const auto& cell : cells) {
    if (cell.area <= 0.0 || cell.diam <= 0.0)
      throw std::invalid_argument("cell area and diameter must be positive");
    double rho = (cell.guard_radius > 0.0) ? cell.guard_radius : 0.5 * cell.diam;
    if (rho > 0.5 * cell.diam * (1.0 + 1e-14))
      throw std::invalid_argument("guard disk does not fit inside its cell");
    double g = gamma_fn ? gamma_fn(cell.center) : 0.0;
    if (g < 0.0) throw std::invalid_argument("gamma must be nonnegative");
    double d = (g > 0.0)
                   ? std::pow(4.0 * g * cell.area / alpha, 1.0 / (n - 2))
                   : 0.0;
    if (cell.diam > 8.0 * rho * (1.0 + 1e-14))
      throw std::invalid_argument("cell diameter exceeds 8 rho");
    if (d > rho / 8.0) {
      std::ostringstream os;
      os << "computed hole size d=" << d << " exceeds rho/8=" << rho / 8.0;
      throw std::invalid_argument(os.str());
    }
    if (d > 0.0) any_positive = true;
    Hole hole;
    hole.center = cell.center;
    hole.half_width = d;
    hole.guard_radius = rho;
    config.holes.push_back(hole);
  }
  config.degenerate = !any_positive && !cells.empty();
  throw_if_invalid(config);
  return config;
}

ValidationReport validate_assumptions(const SieveConfig& config) {
  ValidationReport report;
  const auto& holes = config.holes;
  const Domain2D& dom = config.domain;

  {
    ValidationIssue issue{"guard-balls-disjoint", true, -1, ""};
    for (std::size_t k = 0; k + 1 < holes.size() && issue.pass; ++k) {
      for (std::size_t l = k + 1; l < holes.size(); ++l) {
        double gap = std::abs(holes[k].center - holes[l].center);
        double need = holes[k].guard_radius + holes[l].guard_radius;
        // Touching disks (gap == need) are allowed; only strict overlap fails.
        if (gap < need * (1.0 - 1e-14)) {
          issue.pass = false;
          issue.worst_hole = static_cast<int>(k);
          std::ostringstream os;
          os << "holes " << k << " and " << l << " overlap: gap=" << gap
             << " < " << need;
          issue.detail = os.str();
          break;
        }
      }
    }
    report.checks.push_back(issue);
  }

  {
    ValidationIssue issue{"guard-radius-bound", true, -1, ""};
    double bound = std::min(1.0, 0.5 * dom.H);
    for (std::size_t k = 0; k < holes.size(); ++k) {
      if (holes[k].guard_radius <= 0.0 || holes[k].guard_radius >= bound) {
        issue.pass = false;
        issue.worst_hole = static_cast<int>(k);
        std::ostringstream os;
        os << "rho_" << k << "=" << holes[k].guard_radius
           << " outside (0, " << bound << ")";
        issue.detail = os.str();
        break;
      }
    }
    report.checks.push_back(issue);
  }

  {
    ValidationIssue issue{"hole-size-ratio", true, -1, ""};
    for (std::size_t k = 0; k < holes.size(); ++k) {
      if (holes[k].half_width < 0.0 ||
          holes[k].half_width > holes[k].guard_radius / 8.0 * (1.0 + 1e-14)) {
        issue.pass = false;
        issue.worst_hole = static_cast<int>(k);
        std::ostringstream os;
        os << "d_" << k << "=" << holes[k].half_width << " exceeds rho/8="
           << holes[k].guard_radius / 8.0;
        issue.detail = os.str();
        break;
      }
    }
    report.checks.push_back(issue);
  }

  {
    ValidationIssue issue{"gamma-bounded", true, -1, ""};
    RateParams rp;
    // Recompute gamma_k inline to avoid recursion into rate_params.
    for (std::size_t k = 0; k < holes.size(); ++k) {
      double d = holes[k].half_width;
      double rho = holes[k].guard_radius;
      double g = 0.0;
      if (d > 0.0 && rho > 0.0) {
        if (config.n == 2)
          g = (d < 1.0) ? 1.0 / (std::abs(std::log(d)) * rho)
                        : std::numeric_limits<double>::infinity();
        else
          g = std::pow(d, config.n - 2) * std::pow(rho, 1 - config.n);
      }
      if (!std::isfinite(g)) {
        issue.pass = false;
        issue.worst_hole = static_cast<int>(k);
        issue.detail = "gamma_k not finite";
        break;
      }
      rp.gamma_k.push_back(g);
    }
    report.checks.push_back(issue);
  }

  {
    ValidationIssue issue{"guard-inside-interface", true, -1, ""};
    for (std::size_t k = 0; k < holes.size(); ++k) {
      if (holes[k].center - holes[k].guard_radius < -1e-14 ||
          holes[k].center + holes[k].guard_radius > dom.L + 1e-14) {
        issue.pass = false;
        issue.worst_hole = static_cast<int>(k);
        std::ostringstream os;
        os << "guard disk of hole " << k << " leaves [0, " << dom.L << "]";
        issue.detail = os.str();
        break;
      }
    }
    report.checks.push_back(issue);
  }

  return report;
}

RateParams rate_params(const SieveConfig& config, const KappaSpec& kappa) {
  RateParams rp;
  const int n = config.n;
  for (const Hole& h : config.holes) {
    double d = h.half_width;
    double rho = h.guard_radius;
    double g = 0.0;
    double eta = 0.0;
    if (d > 0.0 && rho > 0.0) {
      if (n == 2) {
        g = 1.0 / (std::abs(std::log(d)) * rho);
        eta = 1.0 / std::sqrt(std::abs(std::log(d / rho)));
      } else if (n == 3) {
        g = d / (rho * rho);
        eta = std::sqrt(d / rho);
      } else if (n == 4) {
        g = d * d / (rho * rho * rho);
        double t = d / rho;
        eta = t * std::abs(std::log(t));
      } else {
        g = std::pow(d, n - 2) * std::pow(rho, 1 - n);
        eta = d / rho;
      }
    }
    rp.gamma_k.push_back(g);
    rp.eta_k.push_back(eta);
  }

  switch (kappa.rule) {
    case KappaRule::small_holes: {
      double s = 0.0;
      for (double g : rp.gamma_k) s = std::max(s, g);
      rp.kappa_eps = std::sqrt(s);
      break;
    }
    case KappaRule::regular: {
      double s = 0.0;
      for (const Hole& h : config.holes) s = std::max(s, h.guard_radius);
      rp.kappa_eps = std::sqrt(s);
      break;
    }
    case KappaRule::user:
      rp.kappa_eps = kappa.user_value;
      break;
  }

  rp.mu_eps = std::max(rp.kappa_eps, rp.sup_eta());
  if (n == 2) {
    double extra = 0.0;
    for (std::size_t k = 0; k < config.holes.size(); ++k) {
      double rho = config.holes[k].guard_radius;
      if (rho <= 0.0 || rho >= 1.0) continue;
      extra = std::max(extra, std::sqrt(rho) * rp.gamma_k[k] *
                                   std::abs(std::log(rho)));
    }
    rp.mu_eps = std::max(rp.mu_eps, extra);
  }
  return rp;
}

std::function<double(double)> const_gamma(double value) {
  return [value](double) { return value; };
}

}  // namespace sieve
