#include "doctest.h"

#include <cmath>

#include "fluxlab/anneal.hpp"
#include "fluxlab/error.hpp"

using namespace fluxlab;

namespace {

AnnealConfig short_schedule() {
  AnnealConfig c;
  c.t_initial = 0.5;
  c.t_final = 0.01;
  c.cooling = 0.7;
  c.sweeps_per_temp = 3;
  c.restarts = 3;
  c.seed = 9;
  return c;
}

}  // namespace

TEST_CASE("objective is invariant along pure-gauge directions") {
  const Lattice lat = build_lattice(2, 1);
  const ModelParams p{};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GaugeField tilde = random_field(lat, seed);
    const GaugeField moved = add(tilde, pure_gauge(lat, random_phases(lat, seed + 50)));
    CHECK(std::abs(anneal_objective(lat, p, 2.0, tilde) - anneal_objective(lat, p, 2.0, moved)) <= 1e-10);
  }
}

TEST_CASE("free landscape is the plaquette cosine") {
  const Lattice lat = build_lattice(2, 1);
  const ModelParams p{0.0, 0.0, 1.5, 1.0};
  const double constant = -8.0 * std::log(2.0) / 2.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GaugeField tilde = random_field(lat, seed);
    double cosines = 0.0;
    for (const Plaquette& pl : lat.plaquettes()) cosines += std::cos(flux(lat, tilde, pl));
    CHECK(anneal_objective(lat, p, 2.0, tilde) == doctest::Approx(constant - 1.5 * cosines).epsilon(1e-13));
    CHECK(anneal_objective(lat, p, 2.0, zero_field(lat)) < anneal_objective(lat, p, 2.0, tilde));
  }
}

TEST_CASE("zero field beats random fields in the interacting objective") {
  const Lattice lat = build_lattice(2, 1);
  const ModelParams p{};
  const double zero = anneal_objective(lat, p, 2.0, zero_field(lat));
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(zero <= anneal_objective(lat, p, 2.0, random_field(lat, seed)) + 1e-10);
}

TEST_CASE("schedule validation") {
  AnnealConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.num_stages() == 135);
  auto message = [](const AnnealConfig& bad) {
    try {
      bad.validate();
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConstraintViolation);
      return std::string(e.what());
    }
    return std::string();
  };
  c.cooling = 1.0;
  CHECK(message(c).find("cooling") != std::string::npos);
  c = {};
  c.proposal_width = 4.0;
  CHECK(message(c).find("proposal_width") != std::string::npos);
  c = {};
  c.restarts = 0;
  CHECK(message(c).find("restarts") != std::string::npos);
}

TEST_CASE("trace envelope is monotone and runs are reproducible") {
  const Lattice lat = build_lattice(2, 1);
  const ModelParams p{};
  const AnnealConfig c = short_schedule();
  const AnnealResult a = run_anneal(lat, p, c);
  const AnnealResult b = run_anneal(lat, p, c);
  REQUIRE(a.restarts.size() == 3);
  CHECK(a.zero_beats_starts);
  for (std::size_t r = 0; r < a.restarts.size(); ++r) {
    const RestartResult& ra = a.restarts[r];
    CHECK(ra.restart == static_cast<int>(r));
    REQUIRE(ra.trace.size() == static_cast<std::size_t>(c.num_stages()));
    for (std::size_t s = 1; s < ra.trace.size(); ++s) CHECK(ra.trace[s].best <= ra.trace[s - 1].best);
    CHECK(ra.trace.back().best == ra.best_objective);
    CHECK(ra.best_objective <= ra.start_objective);
    CHECK(ra.flux_distance >= 0.0);
    CHECK(ra.flux_distance <= kPi);
    CHECK(ra.best_objective == b.restarts[r].best_objective);
    CHECK(ra.flux_distance == b.restarts[r].flux_distance);
  }
  CHECK(a.restarts[0].start_objective != a.restarts[1].start_objective);
}

TEST_CASE("starting at the zero field never improves") {
  const Lattice lat = build_lattice(2, 1);
  AnnealConfig c = short_schedule();
  c.start_from_zero = true;
  c.restarts = 1;
  const AnnealResult r = run_anneal(lat, {}, c);
  CHECK(r.restarts[0].flux_distance == 0.0);
  CHECK(r.restarts[0].best_objective == r.zero_objective);
  CHECK(r.restarts[0].converged);
}
