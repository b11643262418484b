#include "doctest.h"

#include <random>

#include "loqs/protocols.hpp"

using namespace loqs;

namespace {

QubitRegister random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    VectorXcd v(1LL << n);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cxd(g(rng), g(rng));
    return QubitRegister(n, std::move(v), true);
}

double outcome_probability(const std::vector<BellOutcome>& r, BellOutcomeKind k) {
    for (auto& o : r)
        if (o.which == k) return o.probability;
    return 0.0;
}

}  // namespace

TEST_CASE("Bell analyzer identifies phi+/phi-, never misidentifies, psi inconclusive") {
    auto check = [&](const char* name, BellOutcomeKind want) {
        auto r = linear_bell_analysis(QubitRegister::bell(name));
        for (auto& o : r) {
            if (o.which == want) CHECK(o.probability == doctest::Approx(1.0).epsilon(1e-12));
            else CHECK(o.probability == doctest::Approx(0.0).epsilon(1e-12));
        }
    };
    check("phi+", BellOutcomeKind::PhiPlus);
    check("phi-", BellOutcomeKind::PhiMinus);
    check("psi+", BellOutcomeKind::Inconclusive);
    check("psi-", BellOutcomeKind::Inconclusive);

    // random two-photon inputs: conclusive weights equal the Bell overlaps
    std::mt19937_64 rng(2);
    for (int t = 0; t < 5; ++t) {
        auto s = random_state(2, rng);
        auto r = linear_bell_analysis(s);
        double pp = std::norm(s.inner(QubitRegister::bell("phi+")));
        double pm = std::norm(s.inner(QubitRegister::bell("phi-")));
        CHECK(outcome_probability(r, BellOutcomeKind::PhiPlus) == doctest::Approx(pp).epsilon(1e-10));
        CHECK(outcome_probability(r, BellOutcomeKind::PhiMinus) == doctest::Approx(pm).epsilon(1e-10));
    }
}

TEST_CASE("GHZ analyzer: threefold coincidences only for Phi0+-, split by H parity") {
    auto ghz3 = [](int flip, int sign) {  // flip: which photon differs; 0 = none
        VectorXcd v = VectorXcd::Zero(8);
        int a = 0, b = 7;
        if (flip == 1) { a = 4; b = 3; }
        if (flip == 2) { a = 2; b = 5; }
        if (flip == 3) { a = 1; b = 6; }
        v(a) = 1 / std::sqrt(2.0);
        v(b) = sign / std::sqrt(2.0);
        return QubitRegister(3, std::move(v));
    };
    auto probability = [](const std::vector<GhzOutcome>& r, GhzOutcomeKind k) {
        for (auto& o : r)
            if (o.which == k) return o.probability;
        return 0.0;
    };

    CHECK(probability(ghz_analysis(ghz3(0, 1)), GhzOutcomeKind::PhiPlus) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(probability(ghz_analysis(ghz3(0, -1)), GhzOutcomeKind::PhiMinus) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (int flip : {1, 2, 3})
        for (int sign : {1, -1})
            CHECK(probability(ghz_analysis(ghz3(flip, sign)), GhzOutcomeKind::Inconclusive) ==
                  doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense coding: capacities 2.0 and log2(3); message 11 decodes to psi+") {
    auto full = dense_coding(3, AnalyzerGrade::Full);
    CHECK(full.capacity_bits == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(full.decoded.at("psi+") == doctest::Approx(1.0));

    auto two = dense_coding(0, AnalyzerGrade::TwoState);
    CHECK(two.capacity_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

    CHECK(dense_coding(0, AnalyzerGrade::Full).decoded.at("psi-") == doctest::Approx(1.0));
    CHECK(dense_coding(1, AnalyzerGrade::Full).decoded.at("phi-") == doctest::Approx(1.0));
    CHECK(dense_coding(2, AnalyzerGrade::Full).decoded.at("phi+") == doctest::Approx(1.0));
}

TEST_CASE("teleportation: uniform Bell outcomes, fidelity 1 after correction") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto chi = random_state(1, rng);
        auto res = teleport(chi, BellKind::PsiMinus);
        REQUIRE(res.branches.size() == 4);
        for (auto& b : res.branches) {
            CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-10));
            CHECK(b.fidelity_corrected == doctest::Approx(1.0).epsilon(1e-10));
        }
        CHECK(res.mean_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("teleportation corrections match the psi- expansion") {
    std::mt19937_64 rng(11);
    auto chi = random_state(1, rng);
    auto res = teleport(chi, BellKind::PsiMinus);
    std::map<BellOutcomeKind, char> want = {{BellOutcomeKind::PsiMinus, 'i'},
                                            {BellOutcomeKind::PsiPlus, 'z'},
                                            {BellOutcomeKind::PhiMinus, 'x'},
                                            {BellOutcomeKind::PhiPlus, 'y'}};
    for (auto& b : res.branches) CHECK(b.correction.ops[0] == want[b.outcome]);

    auto h = teleport(QubitRegister::basis(1, 0), BellKind::PsiMinus);
    for (auto& b : h.branches)
        if (b.outcome == BellOutcomeKind::PsiMinus)
            CHECK(b.conditional.equals_up_to_phase(QubitRegister::basis(1, 0), 1e-12));
}

TEST_CASE("conclusive-only teleportation succeeds in a quarter of cases") {
    std::mt19937_64 rng(13);
    auto res = teleport(random_state(1, rng), BellKind::PsiMinus, false);
    CHECK(res.success_probability == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(res.mean_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.classical_limit == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Rome two-particle scheme: complete measurement, published outcome table") {
    std::mt19937_64 rng(17);
    auto chi = random_state(1, rng);
    auto branches = teleport_rome(chi);
    REQUIRE(branches.size() == 4);
    for (auto& b : branches) {
        CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(b.fidelity_corrected == doctest::Approx(1.0).epsilon(1e-10));
        if (b.outcome == "psi-") {
            CHECK(b.bob_state.equals_up_to_phase(chi, 1e-10));
            CHECK(b.correction.ops[0] == 'i');
        }
        if (b.outcome == "phi+") CHECK(b.correction.ops[0] == 'z');
        if (b.outcome == "psi+") CHECK(b.correction.ops[0] == 'x');
        if (b.outcome == "phi-") CHECK(b.correction.ops[0] == 'y');
    }
}

TEST_CASE("open-destination teleportation: three-qubit encoding, any receiver works") {
    VectorXcd plus45(2);
    plus45 << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    QubitRegister chi(1, std::move(plus45));
    for (int receiver : {0, 1, 2})
        CHECK(teleport_open_destination(chi, receiver).fidelity == doctest::Approx(1.0).epsilon(1e-10));

    std::mt19937_64 rng(23);
    auto chi2 = random_state(1, rng);
    auto res = teleport_open_destination(chi2, 1);
    VectorXcd enc = VectorXcd::Zero(8);
    enc(0) = chi2.amplitude(0);
    enc(7) = chi2.amplitude(1);
    CHECK(res.encoded.equals_up_to_phase(QubitRegister(3, std::move(enc), true), 1e-10));
    CHECK(res.fidelity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-qubit teleportation: product and entangled inputs at fidelity 1") {
    auto r1 = teleport_two_qubit(QubitRegister::basis(2, 1));  // |HV>
    CHECK(r1.fidelity_direct == doctest::Approx(1.0).epsilon(1e-10));

    auto r2 = teleport_two_qubit(QubitRegister::bell("psi-"));
    CHECK(r2.fidelity_direct == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r2.fidelity_by_pauli == doctest::Approx(r2.fidelity_direct).epsilon(1e-10));
    CHECK(r2.fidelity_direct > 0.5);
    CHECK(r2.estimation_limit == doctest::Approx(0.40));

    std::mt19937_64 rng(29);
    for (int t = 0; t < 5; ++t) {
        auto chi = random_state(2, rng);
        CHECK(teleport_two_qubit(chi).fidelity_direct == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("the two fidelity formulas agree on random mixed states") {
    std::mt19937_64 rng(31);
    MatrixXcd w = 0.25 * (MatrixXcd::Identity(4, 4) - kron_all({pauli_x(), pauli_x()}) -
                          kron_all({pauli_y(), pauli_y()}) - kron_all({pauli_z(), pauli_z()}));
    for (int t = 0; t < 10; ++t) {
        MatrixXcd m = MatrixXcd::Zero(4, 4);
        for (int k = 0; k < 3; ++k) m += DensityOperator(random_state(2, rng)).matrix() / 3.0;
        DensityOperator rho(2, m);
        double direct = fidelity(rho, QubitRegister::bell("psi-"));
        double by_pauli = (w * rho.matrix()).trace().real();
        CHECK(direct == doctest::Approx(by_pauli).epsilon(1e-10));
    }
}

TEST_CASE("entanglement swapping: outcome-matched pairs, maximally mixed unconditioned") {
    auto res = entanglement_swap();
    REQUIRE(res.branches.size() == 4);
    for (auto& b : res.branches) {
        CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-10));
        QubitRegister want = [&] {
            switch (b.outcome) {
                case BellOutcomeKind::PsiPlus: return QubitRegister::bell("psi+");
                case BellOutcomeKind::PsiMinus: return QubitRegister::bell("psi-");
                case BellOutcomeKind::PhiPlus: return QubitRegister::bell("phi+");
                default: return QubitRegister::bell("phi-");
            }
        }();
        CHECK(b.pair14.equals_up_to_phase(want, 1e-10));
    }
    CHECK((res.unconditioned_14.matrix() - MatrixXcd::Identity(4, 4) / 4).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("werner twirl produces Werner states and preserves the singlet fidelity") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 5; ++t) {
        MatrixXcd m = MatrixXcd::Zero(4, 4);
        for (int k = 0; k < 2; ++k) m += DensityOperator(random_state(2, rng)).matrix() / 2.0;
        DensityOperator rho(2, m);
        DensityOperator tw = werner_twirl(rho);
        double f = fidelity(rho, QubitRegister::bell("psi-"));
        CHECK(fidelity(tw, QubitRegister::bell("psi-")) == doctest::Approx(f).epsilon(1e-10));
        CHECK((tw.matrix() - werner_state(f).matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("BBPSSW round matches the closed-form map") {
    // fixed point and strict improvement over a dense fidelity grid
    for (int k = 0; k < 50; ++k) {
        double f = 0.505 + k * (0.99 - 0.505) / 49;
        CHECK(purify_bbpssw(f).fidelity_out > f);
        CHECK(purify_linear_optical(f).fidelity_out > f);
    }
    for (double f = 0.55; f < 0.96; f += 0.05) {
        auto r = purify_bbpssw(f);
        CHECK(r.fidelity_out == doctest::Approx(bbpssw_formula(f)).epsilon(1e-10));
        double denom = f * f + 2 * f * (1 - f) / 3 + 5 * (1 - f) * (1 - f) / 9;
        CHECK(r.success_probability == doctest::Approx(denom).epsilon(1e-10));
        CHECK(r.fidelity_out > f);
    }
    CHECK(purify_bbpssw(0.75).fidelity_out == doctest::Approx(0.5694444444 / 0.7222222222).epsilon(1e-9));
    CHECK(purify_bbpssw(1.0).fidelity_out == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(purify_bbpssw(0.6).fidelity_out > 0.6);
    CHECK_THROWS_AS(purify_bbpssw(0.5), std::invalid_argument);
}

TEST_CASE("linear-optical purification: closed-form map, cross terms vanish") {
    for (double f = 0.55; f < 0.96; f += 0.05) {
        auto r = purify_linear_optical(f);
        double want = f * f / (f * f + (1 - f) * (1 - f));
        CHECK(r.fidelity_out == doctest::Approx(want).epsilon(1e-10));
        CHECK(r.success_probability ==
              doctest::Approx(0.5 * (f * f + (1 - f) * (1 - f))).epsilon(1e-10));
        CHECK(r.fidelity_out > f);
    }
    CHECK(purify_linear_optical(0.75).fidelity_out == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(purify_linear_optical(0.80).fidelity_out == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    CHECK(purify_cross_term_probability(0.75) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(purify_linear_optical(0.5), std::invalid_argument);
}

TEST_CASE("Fock-level purification cross-check at F = 0.75") {
    auto fock = purify_linear_optical_fock(0.75);
    auto qubit = purify_linear_optical(0.75);
    CHECK(fock.fidelity_out == doctest::Approx(qubit.fidelity_out).epsilon(1e-10));
    CHECK(fock.success_probability == doctest::Approx(qubit.success_probability).epsilon(1e-10));
}

TEST_CASE("Procrustean concentration") {
    auto equal = concentrate_procrustean(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    CHECK(equal.success_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(equal.fidelity == doctest::Approx(1.0).epsilon(1e-12));

    auto skew = concentrate_procrustean(std::sqrt(0.8), std::sqrt(0.2));
    CHECK(skew.success_probability == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(skew.fidelity == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(concentrate_procrustean(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("nondestructive CNOT: herald table and corrected outputs") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 3; ++t) {
        auto chi = random_state(2, rng);
        auto res = cnot_nondestructive(chi);
        CHECK(res.success_probability == doctest::Approx(0.25).epsilon(1e-10));
        REQUIRE(res.branches.size() == 4);
        QubitRegister want = chi.apply2(cnot_gate(), 0, 1);
        std::map<std::string, std::string> herald_to_corr;
        for (auto& b : res.branches) {
            CHECK(b.probability == doctest::Approx(1.0 / 16).epsilon(1e-10));
            CHECK(apply_correction(b.output, b.correction).equals_up_to_phase(want, 1e-9));
            herald_to_corr[b.herald] = std::string(b.correction.ops.begin(), b.correction.ops.end());
        }
        // herald V'V needs no correction, H' heralds add the z, H heralds
        // the x (the z rides on the control output, the x on the target)
        CHECK(herald_to_corr["V'V"] == "ii");
        CHECK(herald_to_corr["H'V"] == "zi");
        CHECK(herald_to_corr["H'H"] == "zx");
        CHECK(herald_to_corr["V'H"] == "ix");
    }

    VectorXcd plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    auto res = cnot_nondestructive(QubitRegister(1, std::move(plus)).tensor(QubitRegister::basis(1, 0)));
    for (auto& b : res.branches)
        CHECK(apply_correction(b.output, b.correction)
                  .equals_up_to_phase(QubitRegister::bell("phi+"), 1e-9));
}

TEST_CASE("event-ready entangler: 1/4 four-mode, 1/8 overall, heralded psi-") {
    auto res = event_ready_entangler();
    CHECK(res.four_mode_probability == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(res.success_probability == doctest::Approx(0.125).epsilon(1e-10));
    REQUIRE(res.branches.size() == 4);
    for (auto& b : res.branches) {
        CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(apply_correction(b.pair_ab, b.correction)
                  .equals_up_to_phase(QubitRegister::bell("psi-"), 1e-9));
        if (b.herald == BellOutcomeKind::PhiPlus)
            CHECK(b.pair_ab.equals_up_to_phase(QubitRegister::bell("psi-"), 1e-9));
    }
}

TEST_CASE("Franson fringes: visibility 2|alpha beta|, period 2 pi") {
    auto balanced = franson_timebin(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    CHECK(balanced.visibility == doctest::Approx(1.0).epsilon(1e-12));

    auto skew = franson_timebin(std::sqrt(0.9), std::sqrt(0.1));
    CHECK(skew.visibility == doctest::Approx(0.6).epsilon(1e-12));
    for (std::size_t k = 0; k < skew.phis.size(); ++k)
        CHECK(skew.fringe[k] == doctest::Approx(1 + 0.6 * std::cos(skew.phis[k])).epsilon(1e-10));

    CHECK_THROWS_AS(franson_timebin(1.0, 1.0), std::invalid_argument);
}
