#include <doctest.h>

#include "lindblad/errors.hpp"
#include "lindblad/models.hpp"
#include "lindblad/sampling.hpp"
#include "oracles.hpp"

using namespace lindblad;

TEST_CASE("kind names round trip") {
  for (auto k : {ModelKind::ConstantH, ModelKind::Pitchfork, ModelKind::SaddleNode, ModelKind::Transcritical,
                 ModelKind::Hopf, ModelKind::Roessler}) {
    CHECK(parse_model_kind(to_string(k)) == k);
    CHECK(default_model(k).kind() == k);
  }
  CHECK_FALSE(parse_model_kind("Lorenz").has_value());
}

TEST_CASE("parameter access by name") {
  ModelSpec m = default_model(ModelKind::Hopf);
  CHECK(m.param_names() == std::vector<std::string>{"delta", "epsilon", "b"});
  CHECK(m.get("epsilon") == 0.25);
  m = m.with("epsilon", -0.1);
  CHECK(m.get("epsilon") == -0.1);
  CHECK_THROWS_AS((void)m.get("alpha"), InvalidParams);
  CHECK_THROWS_AS((void)m.with("alpha", 1.0), InvalidParams);
}

TEST_CASE("pitchfork at the centre") {
  const auto t = evaluate({PitchforkParams{0.5, -0.25}}, {0, 0, 0});
  CHECK(t.h.h11 == 0.5);
  CHECK(t.h.h22 == 0.5);
  CHECK(t.h.h33 == 0.0);
  CHECK(t.h.h12 == cplx{});
  CHECK(t.h.h13 == cplx{});
  CHECK(t.h.h23 == cplx{});
}

TEST_CASE("hopf at the origin") {
  const auto t = evaluate({HopfParams{0.9, 0.25, 0.2}}, {0, 0, 0});
  CHECK(t.h.h11 == doctest::Approx(0.325));
  CHECK(t.h.h22 == doctest::Approx(0.325));
  CHECK(t.h.h33 == 0.0);
  CHECK(t.h.h12 == cplx(0.125, 0));
  CHECK(t.h.h13 == cplx{});
  CHECK(t.h.h23 == cplx{});
}

TEST_CASE("roessler at the origin") {
  const auto t = evaluate(default_model(ModelKind::Roessler), {0, 0, 0});
  CHECK(t.h.h11 == doctest::Approx(787.55));
  CHECK(t.h.h22 == doctest::Approx(787.45));
  CHECK(t.h.h33 == doctest::Approx(590.625));
  CHECK(t.H.H10 == cplx{});
}

TEST_CASE("parameter regions") {
  CHECK(validate_params({PitchforkParams{0.5, -0.25}}).ok());
  CHECK_FALSE(validate_params({PitchforkParams{2.0, 0.0}}).ok());
  CHECK_FALSE(validate_params({PitchforkParams{0.5, 3.1}}).ok());
  CHECK(validate_params({SaddleNodeParams{0.5, -0.75, 1.0}}).ok());
  CHECK_FALSE(validate_params({SaddleNodeParams{0.5, -0.75, 1.01}}).ok());
  CHECK_FALSE(validate_params({HopfParams{0.9, 0.5, 0.2}}).ok());
  CHECK(validate_params({HopfParams{0.9, -0.25, 0.2}}).ok());
  CHECK_FALSE(validate_params({HopfParams{1.0, 0.1, 0.2}}).ok());
  CHECK_FALSE(validate_params({TranscriticalParams{1.0, 1.5}}).ok());
  CHECK_FALSE(validate_params({TranscriticalParams{1.0, -1.0}}).ok());
  CHECK(validate_params({TranscriticalParams{1.0, -0.99}}).ok());
  CHECK_FALSE(validate_params({ConstantHParams{-1, 1, 0}}).ok());
  CHECK_FALSE(validate_params({RoesslerParams{0.1, 0.1, 14, -50, 0.35, 1}}).ok());
  CHECK_FALSE(validate_params({RoesslerParams{0.1, 0.1, 14, 50, 0.0, 1}}).ok());
  CHECK_FALSE(validate_params({PitchforkParams{std::nan(""), 0}}).ok());
  CHECK_THROWS_AS(require_valid({HopfParams{0.9, 0.5, 0.2}}), InvalidParams);
  CHECK_THROWS_AS((void)evaluate_checked({HopfParams{0.9, 0.5, 0.2}}, {}), InvalidParams);
}

TEST_CASE("nonneg scan") {
  CHECK(nonneg_scan({PitchforkParams{0.5, -0.25}}, 1001) >= 0.0);
  CHECK(nonneg_scan({TranscriticalParams{1.0, 0.5}}, 1001) == 0.0);
  CHECK(evaluate({TranscriticalParams{1.0, 0.5}}, {0, 0, -1}).h.h11 == 0.0);
  CHECK(nonneg_scan({SaddleNodeParams{0.5, 1.0, 1.0}}, 1001) == 0.0);
  CHECK(evaluate({SaddleNodeParams{0.5, 1.0, 1.0}}, {0, 0, 0}).h.h22 == 0.0);
  // Inside the accepted region, yet h22 dips to alpha - b/2 - (alpha - t/2)^2 / 2 at z = alpha - t/2.
  CHECK(validate_params({SaddleNodeParams{0.5, -0.75, 1.0}}).ok());
  CHECK(nonneg_scan({SaddleNodeParams{0.5, -0.75, 1.0}}, 1001) == doctest::Approx(-0.3828125).epsilon(1e-5));
  CHECK(nonneg_scan({SaddleNodeParams{0.5, -0.75, 0.1}}, 1001) > 0.0);
  CHECK_THROWS_AS((void)nonneg_scan(default_model(ModelKind::Hopf), 11), UnsupportedKind);
  CHECK_THROWS_AS((void)nonneg_scan(default_model(ModelKind::Roessler), 11), UnsupportedKind);
}

TEST_CASE("pitchfork symmetry is exact") {
  const ModelSpec m{PitchforkParams{0.7, 0.3}};
  for (int i = 0; i <= 200; ++i) {
    const double z = -1.0 + i / 100.0;
    CHECK(evaluate(m, {0, 0, z}).h.h11 == evaluate(m, {0, 0, -z}).h.h22);
  }
}

TEST_CASE("transverse rate stays positive for one-dimensional kinds") {
  for (const ModelSpec& m : {ModelSpec{PitchforkParams{0.5, -0.25}}, ModelSpec{PitchforkParams{1.9, 0.0}},
                             ModelSpec{SaddleNodeParams{0.5, -0.75, 0.3}}, ModelSpec{TranscriticalParams{1.0, 0.5}},
                             ModelSpec{TranscriticalParams{0.2, -0.19}}}) {
    for (int i = 0; i <= 200; ++i) {
      const auto h = evaluate(m, {0, 0, -1.0 + i / 100.0}).h;
      CHECK(h.gamma() > 0.0);
    }
  }
}

TEST_CASE("coefficient matrix is positive semidefinite across the ball") {
  const std::vector<ModelSpec> models = {
      default_model(ModelKind::Hopf), ModelSpec{HopfParams{0.9, -0.25, 0.2}},
      ModelSpec{HopfParams{0.5, 0.1, 1.0}}, ModelSpec{PitchforkParams{0.5, -0.25}},
      ModelSpec{SaddleNodeParams{0.5, -0.75, 0.1}}, ModelSpec{TranscriticalParams{1.0, 0.5}},
      ModelSpec{ConstantHParams{2, 1, 0.5}}};
  for (const auto& m : models) {
    CAPTURE(to_string(m.kind()));
    int ok = 0;
    const auto states = m.kind() == ModelKind::Hopf ? sample_disk_y0(10000, 8) : sample_ball(10000, 8);
    for (const auto& v : states) {
      if (psd_check(evaluate(m, v).h).ok) ++ok;
    }
    CHECK(ok == 10000);
  }
}

TEST_CASE("hopf coefficient matrix has a gap inside the stated region") {
  // delta = 0.5, epsilon = 0.24 meets epsilon < delta / 2, yet h has a
  // negative eigenvalue near x = +-0.12 on the z = 0 line while the
  // three-term determinant stays positive.
  const ModelSpec m{HopfParams{0.5, 0.24, 0.2}};
  CHECK(validate_params(m).ok());
  double worst = 0.0;
  bool three_term_positive = true;
  for (int i = 0; i <= 400; ++i) {
    const auto h = evaluate(m, {-1.0 + i / 200.0, 0, 0}).h;
    worst = std::min(worst, oracle::hermitian_min_eigenvalue(h));
    three_term_positive = three_term_positive && determinant_three_term(h) >= 0.0;
    CHECK(psd_check(h).ok == (oracle::hermitian_min_eigenvalue(h) >= -1e-12));
  }
  CHECK(worst < -1e-3);
  CHECK(three_term_positive);
}

TEST_CASE("roessler coefficient matrix along the attractor region") {
  const ModelSpec m = default_model(ModelKind::Roessler);
  // The attractor sits within about 0.4 of (eps, 0, 0) in these units.
  const auto states = sample_ball(5000, 2);
  for (const auto& s : states) {
    const BlochVector v{0.35 + 0.3 * s.x, 0.3 * s.y, 0.3 * s.z};
    const auto h = evaluate(m, v).h;
    CHECK(psd_check(h).ok);
  }
}
