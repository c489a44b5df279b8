#include <doctest.h>

#include "scgg/generator.hpp"
#include "test_util.hpp"

using namespace scgg;
using namespace scgg::testutil;

TEST_SUITE_BEGIN("generator");

TEST_CASE("sos vector and initial state") {
  const auto s1 = sos_vector<double>(1);
  CHECK(s1.cols() == 1);
  CHECK(s1(0, 0) == 1.0);
  const auto s3 = sos_vector<double>(3);
  for (int k = 0; k < 3; ++k) CHECK(s3(0, k) == 1.0);
  CHECK_THROWS_AS(sos_vector<double>(0), std::invalid_argument);
  const auto h0 = zero_state<double>();
  for (std::size_t i = 0; i < h0.size(); ++i) CHECK(h0.data()[i] == 0.0);
}

TEST_CASE("step outputs probabilities in (0,1) and finite state") {
  Rng rng(4);
  auto params = GeneratorParams<double>::init(5, rng);
  Matrix<double> r(1, kFeatureWidth);
  for (int j = 0; j < kFeatureWidth; ++j) r(0, j) = rng.uniform(-2, 2);
  const auto [phi, h] = step(r, sos_vector<double>(3), zero_state<double>(), params, 3);
  CHECK(phi.cols() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(phi(0, k) > 0.0);
    CHECK(phi(0, k) < 1.0);
  }
  CHECK(h.all_finite());
  CHECK(h.rows() == kGruLayers);
  CHECK(h.cols() == kHiddenWidth);
}

TEST_CASE("zero output weights give phi = 0.5 everywhere") {
  Rng rng(4);
  auto params = GeneratorParams<double>::init(4, rng);
  params.mlp_w2.value.fill(0.0);
  params.mlp_b2.value.fill(0.0);
  Matrix<double> r(1, kFeatureWidth);
  const auto [phi, h] = step(r, sos_vector<double>(4), zero_state<double>(), params, 4);
  for (int k = 0; k < 4; ++k) CHECK(phi(0, k) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("step is deterministic and enforces m <= m_max") {
  Rng rng(8);
  auto params = GeneratorParams<float>::init(3, rng);
  Matrix<float> r(1, kFeatureWidth);
  for (int j = 0; j < kFeatureWidth; ++j) r(0, j) = static_cast<float>(rng.uniform(-1, 1));
  const auto a = step(r, sos_vector<float>(2), zero_state<float>(), params, 2);
  const auto b = step(r, sos_vector<float>(2), zero_state<float>(), params, 2);
  CHECK(a.first == b.first);   // bit-identical
  CHECK(a.second == b.second);
  CHECK_THROWS_AS(step(r, sos_vector<float>(4), zero_state<float>(), params, 4), std::invalid_argument);
}

TEST_CASE("padding rule: same leading phi entries under a larger m_max") {
  Rng rng(15);
  auto params = GeneratorParams<float>::init(10, rng);
  Matrix<float> r(1, kFeatureWidth);
  for (int j = 0; j < kFeatureWidth; ++j) r(0, j) = static_cast<float>(rng.uniform(-1, 1));
  Matrix<float> s3(1, 3);
  s3(0, 0) = 1.0f;
  s3(0, 2) = 1.0f;
  const auto at3 = step(r, s3, zero_state<float>(), params, 3);
  Matrix<float> s10(1, 10);  // the same links, explicitly zero-padded
  s10(0, 0) = 1.0f;
  s10(0, 2) = 1.0f;
  const auto at10 = step(r, s10, zero_state<float>(), params, 10);
  for (int k = 0; k < 3; ++k) CHECK(at3.first(0, k) == at10.first(0, k));
}

TEST_CASE("step_loss fixed values") {
  Matrix<double> half(1, 2);
  half(0, 0) = half(0, 1) = 0.5;
  CHECK(step_loss(half, LinkVector{1, 0}) == doctest::Approx(0.6931471805599453).epsilon(1e-9));

  Matrix<double> confident(1, 3);
  confident(0, 0) = confident(0, 1) = confident(0, 2) = 1.0 - 1e-7;
  CHECK(step_loss(confident, LinkVector{1, 1, 1}) == doctest::Approx(0.0).epsilon(1e-6));

  // scalar arithmetic oracle: -(ln 0.9 + ln 0.8 + ln 0.7) / 3
  Matrix<double> phi(1, 3);
  phi(0, 0) = 0.9;
  phi(0, 1) = 0.2;
  phi(0, 2) = 0.7;
  const double oracle = -(std::log(0.9) + std::log(1.0 - 0.2) + std::log(0.7)) / 3.0;
  CHECK(oracle == doctest::Approx(0.2283930036369228).epsilon(1e-12));
  CHECK(step_loss(phi, LinkVector{1, 0, 1}) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("step_loss clamps boundary probabilities") {
  Matrix<double> phi(1, 2);
  phi(0, 0) = 0.0;
  phi(0, 1) = 1.0;
  const double loss = step_loss(phi, LinkVector{1, 0});
  CHECK(std::isfinite(loss));
  CHECK(loss == doctest::Approx(-std::log(1e-7)).epsilon(1e-6));
}

TEST_CASE("step_loss gradient matches central finite differences") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 1 + rng.uniform_index(6);
    Matrix<double> phi(1, m);
    LinkVector s(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      phi(0, k) = rng.uniform(0.05, 0.95);
      s[static_cast<std::size_t>(k)] = rng.bernoulli(0.5) ? 1 : 0;
    }
    // analytic gradient through the tape op
    Tape<double> tape;
    Matrix<double> grad_sink(1, m);
    auto phi_var = tape.param(phi, &grad_sink);
    tape.backward(tape.bce_mean(phi_var, to_row<double>(s), kBceEps));
    for (int k = 0; k < m; ++k) {
      const double fd = central_difference(&phi(0, k), 1e-6, [&] { return step_loss(phi, s); });
      const double an = grad_sink(0, k);
      CHECK(std::abs(an - fd) <= 1e-5 * std::max({std::abs(an), std::abs(fd), 1.0}));
    }
  }
}

TEST_CASE("step_loss strictly decreases in phi[k] when s[k] = 1") {
  Matrix<double> phi(1, 3);
  phi(0, 0) = 0.3;
  phi(0, 1) = 0.6;
  phi(0, 2) = 0.2;
  const LinkVector s{0, 1, 0};
  double prev = step_loss(phi, s);
  for (double p = 0.65; p < 1.0; p += 0.05) {
    phi(0, 1) = p;
    const double cur = step_loss(phi, s);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_SUITE_END();
