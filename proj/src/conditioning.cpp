#include "armwind/conditioning.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "armwind/exploration.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"

namespace armwind {

ConditionedSample sample_conditioned(DomainPtr domain, const EventPredicate& event,
                                     const std::string& tag, std::int64_t budget,
                                     std::uint64_t seed) {
  require(budget > 0, ErrorKind::InvalidParameter, "rejection budget must be positive");
  for (std::int64_t a = 0; a < budget; ++a) {
    Configuration c = sample_configuration(domain, derive_seed(seed, std::uint64_t(a)));
    if (event(c)) return {std::move(c), tag, a + 1, seed};
  }
  throw BudgetExceeded("rejection sampling of " + tag, budget);
}

EVertexPair canonical_ends(const DiscreteDomain& domain) {
  return select_e_vertices(domain, 0.0, std::numbers::pi);
}

EventPredicate event_exploration_hits_origin(DomainPtr domain, EVertexPair ends) {
  auto boundary = std::make_shared<const BoundaryColoring>(split_boundary(*domain, ends));
  return [boundary, ends](const Configuration& c) {
    StopRule stop;
    stop.at_origin_hexagon = true;
    return trace_exploration(c, ends, *boundary, stop).stop == StopReason::OriginHexagon;
  };
}

ColorSequence k_arm_sequence(int k) {
  switch (k) {
    case 1: return ColorSequence::parse("B");
    case 2: return ColorSequence::parse("BY");
    case 4: return ColorSequence::parse("BYBY");
    default: throw Error(ErrorKind::InvalidParameter, "k must be 1, 2 or 4");
  }
}

EventPredicate event_k_arms(DomainPtr domain, int k, double r, double R) {
  auto annulus = std::make_shared<const Annulus>(annulus_sites(domain, r, R));
  const ColorSequence sigma = k_arm_sequence(k);
  return [annulus, sigma](const Configuration& c) { return detect_arms(c, *annulus, sigma); };
}

EventPredicate event_good_faces(DomainPtr domain, double R) {
  require(2 * R <= domain->radius(), ErrorKind::InvalidParameter, "faces annulus exceeds domain");
  auto annulus = std::make_shared<const Annulus>(annulus_sites(domain, R, 2 * R));
  return [annulus](const Configuration& c) { return detect_good_faces(c, *annulus).has_value(); };
}

PStarSample sample_p_star(int R_lat, std::uint64_t seed, std::int64_t budget) {
  require(R_lat >= 16, ErrorKind::InvalidParameter, "P* sampling needs R_lat >= 16");
  require(budget > 0, ErrorKind::InvalidParameter, "rejection budget must be positive");
  const DomainPtr domain = build_disc_domain(R_lat);
  const double R = R_lat / 2.0;
  const Annulus annulus = annulus_sites(domain, R, 2 * R);
  const std::uint64_t face_seed = derive_seed(seed, 0);
  const std::uint64_t interior_seed = derive_seed(seed, 1);

  for (std::int64_t a = 0; a < budget; ++a) {
    Configuration c = sample_configuration(domain, derive_seed(face_seed, std::uint64_t(a)));
    std::optional<Faces> faces = detect_good_faces(c, annulus);
    if (!faces) continue;
    std::vector<std::uint64_t> bits(c.bits().begin(), c.bits().end());
    for (std::int64_t b = 0; b < budget; ++b) {
      fill_random_bits(bits, faces->interior, derive_seed(interior_seed, std::uint64_t(b)));
      Configuration inner(domain, bits, seed);
      if (detect_arms_to_faces(inner, *faces, 1.0)) {
        return {std::move(*faces), std::move(inner), a + 1, b + 1, seed};
      }
    }
    throw BudgetExceeded("interior sampling inside faces", budget);
  }
  throw BudgetExceeded("good-faces sampling", budget);
}

std::vector<ConditionedSample> iic_approx_sample(int k, double r_obs,
                                                 const std::vector<int>& R_schedule,
                                                 std::uint64_t seed, std::int64_t budget) {
  std::vector<ConditionedSample> out;
  for (std::size_t i = 0; i < R_schedule.size(); ++i) {
    const int R = R_schedule[i];
    require(r_obs < R && (i == 0 || R > R_schedule[i - 1]), ErrorKind::InvalidParameter,
            "IIC schedule must increase past the observation radius");
    const DomainPtr domain = build_disc_domain(R);
    out.push_back(sample_conditioned(domain, event_k_arms(domain, k, 1.0, R),
                                     "arms" + std::to_string(k), budget, derive_seed(seed, i)));
  }
  return out;
}

Functional parse_functional(const std::string& name) {
  if (name == "crossings") return Functional::Crossings;
  if (name == "arms") return Functional::Arms;
  if (name == "winding") return Functional::Winding;
  throw Error(ErrorKind::InvalidParameter, "unknown functional " + name);
}

std::string to_string(Functional f) {
  switch (f) {
    case Functional::Crossings: return "crossings";
    case Functional::Arms: return "arms";
    case Functional::Winding: return "winding";
  }
  return "?";
}

namespace {

class FunctionalEvaluator {
 public:
  FunctionalEvaluator(Functional f, const DomainPtr& domain, int k, double rprime) : f_(f), k_(k) {
    const double R = domain->radius();
    switch (f) {
      case Functional::Crossings:
        require(2 * rprime <= R, ErrorKind::InvalidParameter, "crossing functional needs 2r' <= R");
        annulus_ = std::make_unique<Annulus>(annulus_sites(domain, rprime, 2 * rprime));
        break;
      case Functional::Arms:
        require(rprime < R / 2, ErrorKind::InvalidParameter, "arm functional needs r' < R/2");
        annulus_ = std::make_unique<Annulus>(annulus_sites(domain, rprime, R / 2));
        break;
      case Functional::Winding:
        ends_ = canonical_ends(*domain);
        boundary_ = std::make_unique<BoundaryColoring>(split_boundary(*domain, ends_));
        stop_.radius = rprime;
        break;
    }
  }

  std::int64_t operator()(const Configuration& c) const {
    switch (f_) {
      case Functional::Crossings: return count_interface_crossings(c, *annulus_);
      case Functional::Arms: return detect_arms(c, *annulus_, k_arm_sequence(k_)) ? 1 : 0;
      case Functional::Winding: {
        const ExplorationPath p = trace_exploration(c, ends_, *boundary_, stop_);
        return std::int64_t(std::floor(p.cum_winding.back() / (std::numbers::pi / 2)));
      }
    }
    return 0;
  }

 private:
  Functional f_;
  int k_;
  std::unique_ptr<Annulus> annulus_;
  EVertexPair ends_{};
  std::unique_ptr<BoundaryColoring> boundary_;
  StopRule stop_;
};

}  // namespace

std::int64_t evaluate_functional(Functional f, const Configuration& config, int k, double rprime) {
  return FunctionalEvaluator(f, config.domain_ptr(), k, rprime)(config);
}

std::vector<DecorrelationReport> decorrelation_experiment(int k, double r,
                                                          const std::vector<double>& rprimes,
                                                          int R, Functional functional,
                                                          std::int64_t n, std::uint64_t seed,
                                                          std::int64_t budget, int threads) {
  require(n > 0, ErrorKind::InvalidParameter, "decorrelation needs samples");
  require(r >= 1 && r < R, ErrorKind::InvalidParameter, "decorrelation needs 1 <= r < R");
  for (double rp : rprimes) {
    require(rp >= r && rp <= R, ErrorKind::InvalidParameter, "decorrelation needs r <= r' <= R");
  }
  const DomainPtr domain = build_disc_domain(R);
  const EventPredicate near = event_k_arms(domain, k, 1.0, R);
  const EventPredicate far = event_k_arms(domain, k, r, R);
  std::vector<FunctionalEvaluator> evals;
  for (double rp : rprimes) evals.emplace_back(functional, domain, k, rp);

  auto draw = [&](const EventPredicate& ev, std::uint64_t side) {
    return parallel_map(std::size_t(n), threads, [&](std::size_t t) {
      const ConditionedSample s =
          sample_conditioned(domain, ev, "arms", budget, derive_seed(seed, side, t));
      std::vector<std::int64_t> vals;
      for (const auto& e : evals) vals.push_back(e(s.config));
      return vals;
    });
  };
  const auto a = draw(near, 0);
  const auto b = draw(far, 1);

  std::vector<DecorrelationReport> out;
  for (std::size_t j = 0; j < rprimes.size(); ++j) {
    std::vector<std::int64_t> va, vb;
    for (const auto& v : a) va.push_back(v[j]);
    for (const auto& v : b) vb.push_back(v[j]);
    const TvEstimate tv = bootstrap_tv(va, vb, 200, derive_seed(seed, 2, j));
    out.push_back({k, r, rprimes[j], R, functional, tv.tv, tv.ci, n, seed});
  }
  return out;
}

std::string decorrelation_csv_header() { return "k,r,rprime,R,functional,tv,ci,n,seed"; }

std::string to_csv(const DecorrelationReport& row) {
  std::ostringstream os;
  os.precision(10);
  os << row.k << ',' << row.r << ',' << row.rprime << ',' << row.R << ',' << to_string(row.functional)
     << ',' << row.tv << ',' << 0.5 * (row.ci.upper - row.ci.lower) << ',' << row.n << ',' << row.seed;
  return os.str();
}

}  // namespace armwind
