#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "visco/diagnostics.hpp"
#include "visco/errors.hpp"
#include "visco/random_fields.hpp"
#include "visco/spectral_ops.hpp"

using namespace visco;

TEST_CASE("structure residuals") {
  const SpectralGrid g(8, 1.0);
  const SpectralField zero(g, Rank::tensor);
  const StructureResiduals z = structure_residuals(zero, Cone({0.0, 0.0, 1.0}, 0.5));
  CHECK(z.det == 0.0);
  CHECK(z.div_et == 0.0);
  CHECK(z.curl == 0.0);
  CHECK(z.leak == 0.0);
  Rng rng(31);
  CHECK(div_et_residual(random_column_solenoidal(g, rng)) < 1e-15);
  const SpectralField E = 0.1 * random_field(g, Rank::tensor, rng);
  CHECK(div_et_residual(E) > 1e-3);
  CHECK(curl_structure_residual(E) > 1e-3);
  CHECK(det_residual(E) > 1e-3);
}

TEST_CASE("determinant residual of a constant shear is zero") {
  const SpectralGrid g(8, 1.0);
  SpectralField E(g, Rank::tensor);
  // E_01 = sin(z): det(I + E) = 1 for strictly upper-triangular E
  E.at(1, g.index_of_modes({0, 0, 1})) = cplx(0.0, -0.5);
  E.at(1, g.index_of_modes({0, 0, -1})) = cplx(0.0, 0.5);
  CHECK(det_residual(E) < 1e-15);
}

TEST_CASE("zero state diagnostics") {
  const SpectralGrid g(8, 1.0);
  FlowState s(g, 1.0);
  const DiagnosticRecord r = record(s, Cone({0.0, 0.0, 1.0}, 0.3), 0.3);
  for (double x : r.I) CHECK(x == 0.0);
  for (double x : r.J) CHECK(x == 0.0);
  CHECK(r.h2_u == 0.0);
  CHECK(r.energy_id_res == 0.0);
  CHECK(transport_annihilation_check(s, 0.3).value == 0.0);
  CHECK(angle_gain_bound_check(s.E, 0.3).max_ratio == 0.0);
  const Lemma31Report l = lemma31_report(s.E, 0.3);
  CHECK(l.lhs == 0.0);
  CHECK(l.ratio == 0.0);
}

TEST_CASE("I terms with zero velocity") {
  Rng rng(32);
  const SpectralGrid g(8, 1.0);
  FlowState s(SpectralField(g, Rank::vector), random_column_solenoidal(g, rng), 0.0, 1.0);
  const auto I = compute_I_terms(s, 0.2);
  CHECK(I[0] == 0.0);
  CHECK(std::abs(I[1]) < 1e-14);
  CHECK(I[3] == 0.0);
  CHECK(I[4] == 0.0);
}

TEST_CASE("exact cancellations on random states") {
  Rng rng(33);
  const SpectralGrid g(12, 1.0);
  RhsEvaluator ev(g);
  for (int i = 0; i < 4; ++i) {
    FlowState s(random_solenoidal(g, rng), random_column_solenoidal(g, rng), 0.0, 0.8);
    const RhsTerms t = ev.terms(s);
    const IdentityResiduals r = identity_residuals(s, t, 0.25);
    CHECK(r.i3_i6 <= 1e-12 * r.i3_i6_scale);
    CHECK(r.j6 <= 1e-12 * r.j6_scale);
    CHECK(r.h2 <= 1e-12 * r.h2_scale);
    CHECK(r.e <= 1e-12 * r.e_scale);
    const auto I = compute_I_terms(s, t, 0.25);
    CHECK(std::abs(I[2] + I[5]) <= 1e-12 * r.i3_i6_scale);
    CHECK(transport_annihilation_check(s, 0.25).relative < 1e-12);
    // L2 energy identity holds exactly for the model derivatives
    const double e = energy_identity_residual(s, t, 0.25);
    const double scale = 0.0625 * (l2_norm(s.u) * l2_norm(t.du) + l2_norm(s.E) * l2_norm(t.dE));
    CHECK(std::abs(e) < 1e-12 * scale);
  }
}

TEST_CASE("J terms with supplied velocity derivative") {
  Rng rng(34);
  const SpectralGrid g(8, 1.0);
  FlowState s(random_solenoidal(g, rng), random_column_solenoidal(g, rng), 0.0, 0.8);
  RhsEvaluator ev(g);
  const RhsTerms t = ev.terms(s);
  const auto a = compute_J_terms(s, t, 0.3);
  const auto b = compute_J_terms(s, momentum_rhs(s), 0.3);
  for (int i = 0; i < 8; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12).scale(1e-30));
}

TEST_CASE("transport check negative control") {
  Rng rng(35);
  const SpectralGrid g(12, 1.0);
  FlowState s(gradient(random_field(g, Rank::scalar, rng, 3)), random_column_solenoidal(g, rng), 0.0, 1.0);
  CHECK(transport_annihilation_check(s, 0.3).relative > 1e-9);
}

TEST_CASE("angle gain bound") {
  Rng rng(36);
  const SpectralGrid g(10, 1.0);
  for (double theta : {0.3, 0.7}) {
    const Cone cone(random_unit_vector(rng), theta);
    const SpectralField E = restrict_to_cone(random_column_solenoidal(g, rng), cone);
    const AngleGainResult r = angle_gain_bound_check(E, theta);
    CHECK(r.max_ratio <= 1.0 + 1e-10);
    CHECK(r.direct_mismatch < 1e-12);
    CHECK(r.theta_eff <= 2.0 * theta + 1e-12);
    CHECK(r.a_part_max < 1e-12 * testing::max_coeff(E) * testing::max_coeff(E) * 100);
  }
  CHECK_THROWS_AS(angle_gain_bound_check(random_field(g, Rank::tensor, rng), 0.3), PreconditionError);
}

TEST_CASE("lemma 3.1 report") {
  Rng rng(37);
  const SpectralGrid g(8, 1.0);
  const SpectralField E = gradient(random_field(g, Rank::vector, rng));  // rows are gradients
  const Lemma31Report r = lemma31_report(E, 0.3);
  CHECK(r.curl_h1 < 1e-12 * r.lhs);
  CHECK(r.split_bound_holds);
  CHECK(r.pythagoras_defect < 1e-12);
  CHECK(r.ratio > 0.0);
  const Lemma31Report bad = lemma31_report(random_field(g, Rank::tensor, rng), 0.3);
  CHECK_FALSE(bad.applicable);
}

TEST_CASE("energy ledger") {
  EnergyLedger L;
  DiagnosticRecord r;
  r.t = 0.0;
  r.h2_u = 1.0;
  r.h2_E = 1.0;
  r.grad_u_h2 = 1.0;
  r.grad_E_h1 = 2.0;
  L = update_ledger(L, r, 1.0);
  CHECK(L.Etotal == doctest::Approx(2.0));
  r.t = 0.5;
  r.h2_u = 0.5;
  r.h2_E = 0.5;
  r.grad_u_h2 = 0.0;
  r.grad_E_h1 = 0.0;
  const EnergyLedger L2 = update_ledger(L, r, 1.0);
  CHECK(L2.sup_h2 == doctest::Approx(2.0));
  CHECK(L2.int_grad_u == doctest::Approx(0.25));
  CHECK(L2.int_grad_E == doctest::Approx(1.0));
  CHECK(L2.E0 == doctest::Approx(2.25));
  CHECK(L2.Etotal >= L.Etotal);
  r.t = 0.25;
  CHECK_THROWS_AS(update_ledger(L2, r, 1.0), ArgumentError);
}

TEST_CASE("csv schema") {
  const auto& c = csv_columns();
  REQUIRE(c.size() == 31);
  CHECK(c.front() == "t");
  CHECK(c[8] == "I1");
  CHECK(c[14] == "J1");
  CHECK(c.back() == "energy_id_res");
  std::ostringstream out;
  write_csv_header(out);
  DiagnosticRecord r;
  r.t = 0.1;
  write_csv_row(out, r);
  std::string header, row;
  std::istringstream in(out.str());
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header.rfind("t,l2_u,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 30);
  CHECK(row.rfind("0.10000000000000001,", 0) == 0);
}
