#include <cmath>
#include <numbers>

#include "finsler/error.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/specfun.hpp"

namespace finsler {
namespace {

using specfun::log_gamma;
constexpr double kLogPi = 1.1447298858494001741;  // ln pi

void set(SharpConstants& c, const std::string& name, double value, double tilde,
         const std::string& tag) {
  if (!(value > 0.0) || !std::isfinite(value) || !(tilde > 0.0) ||
      !std::isfinite(tilde)) {
    fail(ErrorKind::domain, "sharp_constants: " + name + " is not positive and finite");
  }
  c.values[name] = value;
  c.tilde_values[name] = tilde;
  c.tags[name] = tag;
}

void set_plain(SharpConstants& c, const std::string& name, double value,
               const std::string& tag) {
  set(c, name, value, value, tag);
}

void check_norm_dim(const NormSpec& spec, int dim, const char* family) {
  if (spec.dim() != dim) {
    fail(ErrorKind::input, std::string("sharp_constants(") + family +
                               "): norm must live on R^" + std::to_string(dim) +
                               ", got dimension " + std::to_string(spec.dim()));
  }
}

double log_sobolev_constant(int N, double p) {
  const double pp = p / (p - 1.0);
  return std::log(p / N) + (p - 1.0) * (std::log(p - 1.0) - 1.0) -
         0.5 * p * kLogPi +
         (p / N) * (log_gamma(0.5 * N + 1.0) - log_gamma(N / pp + 1.0));
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::sobolev: return "sobolev";
    case Family::gn: return "gn";
    case Family::nash: return "nash";
    case Family::logsob: return "logsob";
    case Family::poincare: return "poincare";
    case Family::trace: return "trace";
    case Family::trudinger_moser: return "trudinger_moser";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (Family f : all_families()) {
    if (to_string(f) == name) return f;
  }
  if (name == "tm") return Family::trudinger_moser;
  fail(ErrorKind::input, "unknown family '" + name + "'");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = {
      Family::sobolev, Family::gn,    Family::nash,           Family::logsob,
      Family::poincare, Family::trace, Family::trudinger_moser};
  return families;
}

std::string family_label(Family family) {
  switch (family) {
    case Family::sobolev: return "finsler-sobolev";
    case Family::gn: return "finsler-gagliardo-nirenberg";
    case Family::nash: return "finsler-nash";
    case Family::logsob: return "finsler-log-sobolev";
    case Family::poincare: return "finsler-poincare-exterior";
    case Family::trace: return "finsler-sobolev-trace";
    case Family::trudinger_moser: return "finsler-trudinger-moser";
  }
  return "unknown";
}

double SharpConstants::value(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) fail(ErrorKind::input, "no constant named '" + name + "'");
  return it->second;
}

double SharpConstants::tilde(const std::string& name) const {
  auto it = tilde_values.find(name);
  if (it == tilde_values.end()) fail(ErrorKind::input, "no constant named '" + name + "'");
  return it->second;
}

double logsob_normaliser(int N, double p, double sigma) {
  require(p > 1.0 && p < N, ErrorKind::domain, "logsob_normaliser: requires 1 < p < N");
  require(sigma > 0.0, ErrorKind::domain, "logsob_normaliser: requires sigma > 0");
  const double pp = p / (p - 1.0);
  const double log_inner = 0.5 * N * kLogPi + (N / pp) * std::log(sigma / p) +
                           log_gamma(N / pp + 1.0) - log_gamma(0.5 * N + 1.0);
  return std::exp(-log_inner / p);
}

SharpConstants sharp_constants(Family family, int N, double p, const NormSpec& spec,
                               double R) {
  require(R > 0.0, ErrorKind::domain, "sharp_constants: requires R > 0");
  SharpConstants c;
  c.family = family;
  c.N = N;
  c.p = p;
  c.R = R;
  c.norm = describe(spec);

  const int dim = family == Family::trace ? N - 1 : N;
  if (family == Family::trace) {
    require(N >= 3, ErrorKind::domain, "trace: requires N >= 3");
    require(p > 1.0 && p < N - 1, ErrorKind::domain, "trace: requires 1 < p < N - 1");
  }
  require(dim >= 2, ErrorKind::domain, "sharp_constants: requires N >= 2");
  check_norm_dim(spec, dim, to_string(family).c_str());
  const AmbientConstants amb = ambient_constants(spec);
  const double ratio = amb.ratio;
  c.prefactor = ratio;
  set_plain(c, "omega", amb.sphere_area, "surface measure of the unit sphere");
  set_plain(c, "kappa", amb.kappa, "measure of the unit Wulff ball");
  set_plain(c, "ratio", ratio, "omega_{n-1} / (n kappa_n)");

  switch (family) {
    case Family::sobolev: {
      require(p >= 1.0 && p < N, ErrorKind::domain, "sobolev: requires 1 < p < N");
      const double ps = N * p / (N - p);
      double log_s;
      if (p == 1.0) {
        c.display_only = true;
        c.notes.push_back(
            "p = 1 branch as printed, possibly typographical; display only");
        log_s = 0.5 * kLogPi + std::log(N) - log_gamma(1.0 + 0.5 * N) / N;
      } else {
        const double pp = p / (p - 1.0);
        set_plain(c, "p_prime", pp, "conjugate exponent p/(p-1)");
        log_s = 0.5 * p * kLogPi + std::log(N) +
                (p - 1.0) * std::log((N - p) / (p - 1.0)) +
                (p / N) * (log_gamma(N / p) + log_gamma(1.0 + N / pp) -
                           log_gamma(N) - log_gamma(1.0 + 0.5 * N));
      }
      set_plain(c, "p_star", ps, "Sobolev exponent Np/(N-p)");
      set(c, "S", std::exp(log_s), std::exp(log_s + (p / ps - 1.0) * std::log(ratio)),
          "sharp Sobolev constant S_{N,p}; tilde factor ratio^(p/p*-1)");
      break;
    }
    case Family::gn: {
      const double q = p;
      require(N >= 3, ErrorKind::domain, "gn: requires N >= 3");
      require(q > 1.0 && q <= static_cast<double>(N) / (N - 2), ErrorKind::domain,
              "gn: requires 1 < q <= N/(N-2)");
      const double theta = N * (q - 1.0) / (q * (N + 2.0 - (N - 2.0) * q));
      const double g = (q + 1.0) / (q - 1.0);
      const double log_a =
          0.5 * theta * std::log((q - 1.0) * (q + 1.0) / (2.0 * std::numbers::pi * N)) +
          std::log((2.0 * (q + 1.0) - N * (q - 1.0)) / (2.0 * (q + 1.0))) / (2.0 * q) +
          (theta / N) * (log_gamma(g) - log_gamma(g - 0.5 * N));
      set_plain(c, "theta", theta, "Gagliardo-Nirenberg interpolation exponent");
      set(c, "A", std::exp(log_a), std::exp(log_a + (theta / N) * std::log(ratio)),
          "optimal Gagliardo-Nirenberg constant A; tilde factor ratio^(theta/N)");
      break;
    }
    case Family::nash: {
      require(N >= 3, ErrorKind::domain, "nash: requires N >= 3");
      const auto zero = specfun::bessel_first_zero(0.5 * N);
      const double mu = zero.value;
      const double lambda = mu * mu;
      const double log_b = std::log(2.0) + (1.0 + 2.0 / N) * std::log(1.0 + 0.5 * N) +
                           (-1.0 + 2.0 / N) * std::log(N) - std::log(lambda) -
                           (2.0 / N) * std::log(amb.sphere_area);
      set_plain(c, "mu", mu, "first positive zero of J_{N/2}");
      set_plain(c, "lambda_neumann", lambda, "radial Neumann eigenvalue mu^2");
      set(c, "B", std::exp(log_b), std::exp(log_b + (2.0 / N) * std::log(ratio)),
          "Carlen-Loss Nash constant (squared form); tilde factor ratio^(2/N)");
      break;
    }
    case Family::logsob: {
      require(p >= 1.0 && p < N, ErrorKind::domain, "logsob: requires 1 < p < N");
      double log_l;
      if (p == 1.0) {
        c.display_only = true;
        c.notes.push_back("p = 1 branch displayed only; not verified");
        log_l = -std::log(N) - 0.5 * kLogPi + log_gamma(0.5 * N + 1.0) / N;
      } else {
        log_l = log_sobolev_constant(N, p);
        set_plain(c, "p_prime", p / (p - 1.0), "conjugate exponent p/(p-1)");
        set_plain(c, "C_sigma1", logsob_normaliser(N, p, 1.0),
                  "extremal normaliser C(N,p) at sigma = 1");
      }
      set(c, "L", std::exp(log_l), std::exp(log_l + std::log(ratio)),
          "sharp log-Sobolev constant L_p; tilde factor ratio");
      break;
    }
    case Family::poincare: {
      require(p > 1.0 && p < N, ErrorKind::domain, "poincare: requires 1 < p < N");
      set_plain(c, "lambda1", plap_first_eigenvalue(N, p),
                "first Dirichlet eigenvalue of the p-Laplacian on B_1");
      c.notes.push_back("no tilde factor: the prefactor cancels on both sides");
      break;
    }
    case Family::trace: {
      const double pl = (N - 1.0) * p / (N - p);
      const double log_st =
          0.5 * (p - 1.0) * kLogPi + (p - 1.0) * std::log((N - p) / (p - 1.0)) +
          ((p - 1.0) / (N - 1.0)) * (log_gamma((N - 1.0) / (2.0 * (p - 1.0))) -
                                     log_gamma((N - 1.0) * p / (2.0 * (p - 1.0))));
      set_plain(c, "p_lower_star", pl, "trace exponent (N-1)p/(N-p)");
      set(c, "S_T", std::exp(log_st), std::exp(log_st + ((p - pl) / pl) * std::log(ratio)),
          "sharp Sobolev trace constant S_{T,N,p}; tilde factor ratio^((p-p_*)/p_*)");
      c.notes.push_back("trace norm exponent p_* used on both sides");
      break;
    }
    case Family::trudinger_moser: {
      require(N >= 3, ErrorKind::domain, "trudinger_moser: requires N >= 3");
      set_plain(c, "energy_budget", N * (N - 2.0) * amb.kappa / (2.0 * std::numbers::pi),
                "energy budget N(N-2) kappa_N / (2 pi)");
      set_plain(c, "witness_bound", 5.0 * std::numbers::pi * R * R,
                "elementary bound 5 pi R^2 for the Moser family");
      c.notes.push_back("supremum value not claimed; boundedness witness only");
      break;
    }
  }
  return c;
}

}  // namespace finsler
