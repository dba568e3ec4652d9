#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "svb/dense.hpp"
#include "svb/sim.hpp"

using namespace svb;
using sim::NoiseModel;
using sim::NoiseRule;

namespace {

NoiseModel uniform_dep(double eps, double gamma = 0.0) {
    return NoiseModel({NoiseRule{"*", "*", 0, 0, 0, eps, 0}}, gamma);
}

Circuit idle_circuit(int w, int d, const std::string& prefix = "q") {
    std::vector<std::string> qubits;
    for (int i = 0; i < w; ++i) qubits.push_back(prefix + std::to_string(i));
    return Circuit(qubits, std::vector<std::vector<Gate>>(d));
}

DeviceModel ring3() {
    return DeviceModel({"q0", "q1", "q2"}, {{"q0", "q1"}, {"q1", "q2"}, {"q0", "q2"}},
                       {{"rz", 1}, {"sx", 1}, {"cx", 2}});
}

}  // namespace

TEST_CASE("noise model: rule specificity and validation") {
    NoiseModel nm({NoiseRule{"*", "*", 0, 0, 0, 0.01, 0}, NoiseRule{"cx", "*", 0, 0, 0, 0.02, 0},
                   NoiseRule{"cx", "q1", 0, 0, 0, 0.03, 0}, NoiseRule{"*", "q2", 0, 0, 0, 0.04, 0}},
                  0.0);
    CHECK(nm.at("idle", "q0", 0).dep == doctest::Approx(0.01));
    CHECK(nm.at("cx", "q0", 0).dep == doctest::Approx(0.02));
    CHECK(nm.at("cx", "q1", 0).dep == doctest::Approx(0.03));
    CHECK(nm.at("sx", "q2", 0).dep == doctest::Approx(0.04));
    CHECK(nm.at("cx", "q2", 0).dep == doctest::Approx(0.02));  // kind beats qubit

    CHECK_THROWS_AS(NoiseModel({NoiseRule{"*", "*", 0.6, 0.3, 0.3, 0, 0}}, 0.0), InputError);
    CHECK_THROWS_AS(NoiseModel({NoiseRule{"*", "*", 0, 0, 0, 1.0, 0}}, 0.0), InputError);
    CHECK_THROWS_AS(NoiseModel({NoiseRule{"*", "*", -0.1, 0, 0, 0, 0}}, 0.0), InputError);
    CHECK_THROWS_AS(NoiseModel({}, -1.0), InputError);
}

TEST_CASE("noise model: crosstalk scaling and clamping") {
    NoiseModel nm({NoiseRule{"*", "*", 0.2, 0.2, 0.2, 0.4, 0}}, 1.0);
    const auto ch = nm.at("idle", "q0", 3);  // scale 4
    CHECK(ch.px + ch.py + ch.pz <= 1.0);
    CHECK(ch.px + ch.py + ch.pz == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ch.dep < 1.0);
    // scale 2 pushes the pauli sum to 1.2, so it is rescaled just below 1
    const auto mild = nm.at("idle", "q0", 1);
    CHECK(mild.px == doctest::Approx(0.4 / 1.2));
    CHECK(mild.dep == doctest::Approx(0.8));
    const auto calm = nm.at("idle", "q0", 0);
    CHECK(calm.px == doctest::Approx(0.2));
}

TEST_CASE("noise json round-trip") {
    const char* text = R"({"gamma": 0.5, "rules": [
        {"kind": "*", "qubit": "*", "dep": 0.005},
        {"kind": "cx", "qubit": "q1", "px": 0.001, "theta": 0.02}
    ]})";
    const NoiseModel nm = sim::noise_model_from_json_text(text);
    CHECK(nm.gamma() == doctest::Approx(0.5));
    CHECK(nm.has_coherent());
    const NoiseModel back = sim::noise_model_from_json_text(sim::noise_model_to_json_text(nm));
    CHECK(back.rules().size() == 2);
    CHECK(back.at("cx", "q1", 0).theta == doctest::Approx(0.02));
}

TEST_CASE("exact fidelity: noiseless circuits score 1") {
    const auto rc = testing::random_native_circuit(3, 5, 1);
    const NoiseModel nm({}, 0.0);
    CHECK(sim::exact_process_fidelity(rc.circuit, nm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact fidelity: one depolarizing idle location gives F = 1 - eps") {
    const Circuit c = idle_circuit(1, 1);
    CHECK(sim::exact_process_fidelity(c, uniform_dep(0.01)) == doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("exact fidelity: one pauli location gives F = 1 - (px+py+pz)") {
    const Circuit c = idle_circuit(1, 1);
    const NoiseModel nm({NoiseRule{"*", "*", 0.01, 0.02, 0.03, 0, 0}}, 0.0);
    CHECK(sim::exact_process_fidelity(c, nm) == doctest::Approx(0.94).epsilon(1e-12));
}

TEST_CASE("exact fidelity: coherent z-overrotation closed form cos^2(theta/2)") {
    for (double th : {0.3, 1.0, 3.14159265358979 / 2.0}) {
        const Circuit c = idle_circuit(1, 1);
        const NoiseModel nm({NoiseRule{"*", "*", 0, 0, 0, 0, th}}, 0.0);
        const double want = std::cos(th / 2.0) * std::cos(th / 2.0);
        CHECK(sim::exact_process_fidelity(c, nm) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("exact fidelity: capacity guard") {
    const Circuit c = idle_circuit(7, 1);
    CHECK_THROWS_AS(sim::exact_process_fidelity(c, uniform_dep(0.01)), CapacityError);
}

TEST_CASE("zero-fault product: worked example and identities") {
    const NoiseModel nm = uniform_dep(0.001);
    const Circuit c = idle_circuit(2, 3);
    CHECK(sim::zero_fault_bound(c, nm) == doctest::Approx(0.994014980014994).epsilon(1e-12));
    CHECK(sim::zero_fault_bound(c, NoiseModel({}, 0.0)) == doctest::Approx(1.0));
    // uniform eps over shape (w,d) equals (1-eps)^(wd)
    for (int w : {1, 3}) {
        for (int d : {2, 5}) {
            const Circuit cc = idle_circuit(w, d);
            CHECK(sim::zero_fault_bound(cc, uniform_dep(0.004)) ==
                  doctest::Approx(std::pow(0.996, w * d)).epsilon(1e-12));
        }
    }
    const NoiseModel coherent({NoiseRule{"*", "*", 0, 0, 0, 0, 0.1}}, 0.0);
    CHECK_THROWS_AS(sim::zero_fault_bound(c, coherent), UnsupportedModelError);
}

TEST_CASE("multiplicativity band: |F - (1-eps)^(wd)| <= 5 eps^2 w^2 d^2") {
    int trials = 0;
    for (double eps : {1e-3, 1e-2}) {
        const NoiseModel nm = uniform_dep(eps);
        for (int w = 1; w <= 4; ++w) {
            for (int d : {2, 4, 8}) {
                const auto rc = testing::random_native_circuit(w, d, 1000 + trials, 0.4);
                const double f = sim::exact_process_fidelity(rc.circuit, nm);
                const double prod = sim::zero_fault_bound(rc.circuit, nm);
                const double band = 5.0 * eps * eps * w * w * d * d;
                CAPTURE(eps);
                CAPTURE(w);
                CAPTURE(d);
                CHECK(std::abs(f - prod) <= band);
                ++trials;
            }
        }
    }
}

TEST_CASE("block composition: layer-wise partition multiplies under stochastic noise") {
    const NoiseModel nm = uniform_dep(0.004);
    const auto rc = testing::random_native_circuit(3, 8, 77, 0.5);
    const double whole = sim::exact_process_fidelity(rc.circuit, nm);
    double product = 1.0;
    for (int start = 0; start < 8; start += 2) {
        std::vector<std::vector<Gate>> block_layers(rc.circuit.layers().begin() + start,
                                                    rc.circuit.layers().begin() + start + 2);
        const Circuit block(rc.circuit.qubits(), block_layers);
        product *= sim::exact_process_fidelity(block, nm);
    }
    const double band = 5.0 * 0.004 * 0.004 * 9.0 * 64.0;
    CHECK(std::abs(whole - product) <= band);
}

TEST_CASE("coherent cancellation witness: +theta then -theta") {
    for (double th : {0.2, 0.5, 1.0}) {
        // two identity layers made distinguishable by gate kind
        const Circuit c({"q"}, {{Gate("rz", {"q"}, {0.0})}, {Gate("ry", {"q"}, {0.0})}});
        const NoiseModel nm(
            {NoiseRule{"rz", "*", 0, 0, 0, 0, th}, NoiseRule{"ry", "*", 0, 0, 0, 0, -th}}, 0.0);
        const double whole = sim::exact_process_fidelity(c, nm);
        CHECK(whole == doctest::Approx(1.0).epsilon(1e-10));

        const Circuit layer1({"q"}, {{Gate("rz", {"q"}, {0.0})}});
        const Circuit layer2({"q"}, {{Gate("ry", {"q"}, {0.0})}});
        const double product =
            sim::exact_process_fidelity(layer1, nm) * sim::exact_process_fidelity(layer2, nm);
        const double c2 = std::cos(th / 2.0) * std::cos(th / 2.0);
        CHECK(product == doctest::Approx(c2 * c2).epsilon(1e-10));
        CHECK(product < whole);
    }
}

TEST_CASE("crosstalk: effective error grows with in-circuit neighbors") {
    const DeviceModel dev = ring3();
    const NoiseModel nm = uniform_dep(0.005, 0.5);
    // width-w idle snippets on the ring: every qubit sees w-1 neighbors
    double prev_eps = -1.0;
    for (int w = 1; w <= 3; ++w) {
        std::vector<std::string> qubits;
        for (int i = 0; i < w; ++i) qubits.push_back("q" + std::to_string(i));
        const Circuit c(qubits, std::vector<std::vector<Gate>>(4));
        const double f = sim::exact_process_fidelity(c, dev, nm);
        const double eps = 1.0 - std::pow(f, 1.0 / (w * 4.0));
        CHECK(eps > prev_eps);
        // equality with the scaled rate holds to the usual eps^2 corrections
        const double expect = 0.005 * (1.0 + 0.5 * (w - 1));
        CHECK(eps == doctest::Approx(expect).epsilon(0.01));
        prev_eps = eps;
    }
    // without a device, crosstalk is rejected
    CHECK_THROWS_AS(sim::exact_process_fidelity(idle_circuit(1, 1), nm), InputError);
}

TEST_CASE("density conjugation agrees with statevector conjugation") {
    Rng rng(404);
    const std::vector<Gate> gates = {
        Gate("h", {"q0"}),
        Gate("s", {"q1"}),
        Gate("ry", {"q2"}, {0.9}),
        Gate("rz", {"q0"}, {-1.3}),
        Gate("cx", {"q0", "q2"}),
        Gate("cz", {"q1", "q2"}),
        Gate("swap", {"q0", "q1"}),
        Gate("mcx", {"q0", "q1", "q2"}),
        Gate("mcy", {"q1", "q2", "q0"}),
        Gate("mcz", {"q2", "q0", "q1"}),
        Gate("mcry", {"q0", "q2", "q1"}, {0.4}),
    };
    const int n = 3;
    const Circuit holder({"q0", "q1", "q2"}, {});
    for (const auto& g : gates) {
        CAPTURE(g.name);
        dense::Vec phi(8);
        double norm2 = 0.0;
        for (auto& a : phi) {
            a = cplx(rng.normal(), rng.normal());
            norm2 += std::norm(a);
        }
        for (auto& a : phi) a /= std::sqrt(norm2);
        dense::Vec rho(64);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) rho[r * 8 + c] = phi[r] * std::conj(phi[c]);
        }
        std::vector<int> idx;
        for (const auto& q : g.qubits) idx.push_back(holder.qubit_index(q));
        dense::dm_apply_gate(rho, n, g, idx);
        dense::Vec psi = phi;
        dense::apply_gate(psi, n, g, idx);
        double err = 0.0;
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
                err = std::max(err, std::abs(rho[r * 8 + c] - psi[r] * std::conj(psi[c])));
            }
        }
        CHECK(err < 1e-12);
    }
}

TEST_CASE("two-qubit gates contribute one noise location per qubit") {
    // one cx layer: both locations carry the cx rule, so F = (1-eps)^2 exactly
    const Circuit c({"q0", "q1"}, {{Gate("cx", {"q0", "q1"})}});
    const NoiseModel nm({NoiseRule{"cx", "*", 0, 0, 0, 0.01, 0}}, 0.0);
    CHECK(sim::exact_process_fidelity(c, nm) == doctest::Approx(0.99 * 0.99).epsilon(1e-12));
    CHECK(sim::zero_fault_bound(c, nm) == doctest::Approx(0.99 * 0.99).epsilon(1e-12));
    // idle locations take the idle rule, honoring idle-as-noisy
    const NoiseModel idle_nm({NoiseRule{"idle", "*", 0, 0, 0, 0.02, 0}}, 0.0);
    const Circuit with_idle({"q0", "q1"}, {{Gate("sx", {"q0"})}});
    CHECK(sim::exact_process_fidelity(with_idle, idle_nm) == doctest::Approx(0.98).epsilon(1e-12));
}

TEST_CASE("mc estimator: noiseless gives exactly 1 with zero spread") {
    const auto rc = testing::random_native_circuit(3, 4, 5);
    Rng rng(6);
    const auto est = sim::mc_process_fidelity(rc.circuit, NoiseModel({}, 0.0), 50, 1, rng);
    CHECK(est.f == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.stderr_f < 1e-12);
}

TEST_CASE("mc estimator: agrees with exact within 3 sigma (spot check)") {
    const auto rc = testing::random_native_circuit(3, 6, 7, 0.4);
    const NoiseModel nm({NoiseRule{"*", "*", 0.002, 0.002, 0.002, 0, 0}}, 0.0);
    const double exact = sim::exact_process_fidelity(rc.circuit, nm);
    int hits = 0;
    for (int run = 0; run < 20; ++run) {
        Rng rng(100 + run);
        const auto est = sim::mc_process_fidelity(rc.circuit, nm, 600, 1, rng);
        if (std::abs(est.f - exact) <= 3.0 * std::max(est.stderr_f, 1e-12)) ++hits;
    }
    CHECK(hits >= 18);
}

TEST_CASE("mc estimator: unbiased over many independent runs") {
    const auto rc = testing::random_native_circuit(2, 3, 8, 0.4);
    const NoiseModel nm = uniform_dep(0.01);
    const double exact = sim::exact_process_fidelity(rc.circuit, nm);
    const int runs = 1000;
    double sum = 0.0, sumsq = 0.0;
    for (int run = 0; run < runs; ++run) {
        Rng rng(5000 + run);
        const auto est = sim::mc_process_fidelity(rc.circuit, nm, 40, 1, rng);
        sum += est.f;
        sumsq += est.f * est.f;
    }
    const double mean = sum / runs;
    const double var = (sumsq - runs * mean * mean) / (runs - 1);
    const double combined = std::sqrt(var / runs);
    CHECK(std::abs(mean - exact) <= 3.0 * combined);
}

TEST_CASE("mc estimator: stderr scales like fault_samples^(-1/2)") {
    const auto rc = testing::random_native_circuit(2, 4, 9, 0.4);
    const NoiseModel nm = uniform_dep(0.02);
    std::vector<double> log_n, log_se;
    int run_seed = 0;
    for (int n : {100, 400, 1600, 6400}) {
        double se = 0.0;
        const int reps = 8;
        for (int rep = 0; rep < reps; ++rep) {
            Rng rng(900 + run_seed++);
            se += sim::mc_process_fidelity(rc.circuit, nm, n, 1, rng).stderr_f;
        }
        log_n.push_back(std::log(static_cast<double>(n)));
        log_se.push_back(std::log(se / reps));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += log_se[i];
    }
    mx /= log_n.size();
    my /= log_n.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        num += (log_n[i] - mx) * (log_se[i] - my);
        den += (log_n[i] - mx) * (log_n[i] - mx);
    }
    const double slope = num / den;
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("mc estimator: capacity guard") {
    Rng rng(1);
    CHECK_THROWS_AS(sim::mc_process_fidelity(idle_circuit(21, 1), uniform_dep(0.01), 10, 1, rng),
                    CapacityError);
}

TEST_CASE("batch: exact/mc dispatch by width") {
    const NoiseModel nm = uniform_dep(0.002);
    std::vector<snip::Snippet> snippets;
    for (int k = 0; k < 10; ++k) {
        snip::Snippet s;
        const auto rc = testing::random_native_circuit(2, 4, 100 + k, 0.4);
        s.circuit = rc.circuit;
        s.shape = {2, 4};
        s.index = k;
        snippets.push_back(std::move(s));
    }
    {
        snip::Snippet wide;
        wide.circuit = testing::random_native_circuit(12, 50, 7, 0.4).circuit;
        wide.shape = {12, 50};
        snippets.push_back(std::move(wide));
    }
    {
        snip::Snippet too_wide;
        too_wide.circuit = idle_circuit(22, 2);
        too_wide.shape = {22, 2};
        snippets.push_back(std::move(too_wide));
    }
    sim::SimBudget budget;
    budget.fault_samples = 60;
    const DeviceModel dev({}, {}, {});
    const auto records = sim::run_snippet_batch(snippets, dev, nm, budget, 11);
    REQUIRE(records.size() == 12);
    for (int k = 0; k < 10; ++k) {
        CHECK(records[k].method == "exact");
        CHECK(records[k].stderr_f == 0.0);
    }
    CHECK(records[10].method == "mc");
    CHECK(records[10].stderr_f > 0.0);
    CHECK(records[11].failed);
    CHECK(records[11].error.find("capacity") != std::string::npos);

    const auto again = sim::run_snippet_batch(snippets, dev, nm, budget, 11);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].f == again[i].f);  // bit-identical
        CHECK(records[i].stderr_f == again[i].stderr_f);
    }
}

TEST_CASE("records jsonl round-trip") {
    std::vector<sim::FidelityRecord> recs(2);
    recs[0] = {2, 4, 0, 0.9321, 0.001, "mc", 0.25, false, ""};
    recs[1] = {3, 8, 1, 0.0, 0.0, "", 0.0, true, "capacity"};
    const auto back = sim::parse_records_jsonl(sim::records_to_jsonl(recs));
    REQUIRE(back.size() == 2);
    CHECK(back[0].f == recs[0].f);
    CHECK(back[0].method == "mc");
    CHECK(back[0].dropped_frac == doctest::Approx(0.25));
    CHECK(back[1].failed);
    // externally measured records default to method="external"
    const auto ext = sim::parse_records_jsonl(R"({"w":2,"d":4,"k":0,"F":0.5})" "\n");
    CHECK(ext[0].method == "external");
}
