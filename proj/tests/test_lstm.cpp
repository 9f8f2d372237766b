#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "daybt/errors.hpp"
#include "daybt/learners/lstm.hpp"
#include "daybt/learners/mlp.hpp"
#include "daybt/parallel.hpp"
#include "daybt/rng.hpp"

using namespace daybt;

namespace {

Matrix random_sequence(std::size_t steps, std::size_t dim, Rng& rng) {
    Matrix m(steps, dim);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

// central finite differences on the flattened parameter vector
double max_gradcheck_error(const Matrix& seq, double y01, const LstmParams& p) {
    LstmParams grad = LstmParams::zeros(p.input_dim, p.hidden_dim);
    lstm_backward(seq, y01, p, grad);
    const auto analytic = grad.to_flat();

    const double eps = 1e-5;
    auto flat = p.to_flat();
    LstmParams probe = p;
    double worst = 0.0;
    auto loss_at = [&](const std::vector<double>& theta) {
        probe.from_flat(theta);
        const double prob = lstm_forward(seq, probe);
        return -(y01 * std::log(prob) + (1.0 - y01) * std::log(1.0 - prob));
    };
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double keep = flat[i];
        flat[i] = keep + eps;
        const double up = loss_at(flat);
        flat[i] = keep - eps;
        const double down = loss_at(flat);
        flat[i] = keep;
        const double numeric = (up - down) / (2.0 * eps);
        // the 1e-6 floor keeps central-difference cancellation noise
        // (~1e-11 absolute at this eps) out of the relative error
        const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
    }
    return worst;
}

} // namespace

TEST_CASE("all-zero parameters output exactly one half") {
    const LstmParams p = LstmParams::zeros(3, 4);
    Rng rng(1);
    const Matrix seq = random_sequence(5, 3, rng);
    CHECK(lstm_forward(seq, p) == 0.5);
}

TEST_CASE("zero input weights make the output input-independent") {
    Rng rng(2);
    LstmParams p = LstmParams::init(3, 4, rng);
    for (Matrix* m : {&p.w_input, &p.w_forget, &p.w_output, &p.w_cell})
        for (double& v : m->data()) v = 0.0;
    const Matrix a = random_sequence(6, 3, rng);
    const Matrix b = random_sequence(6, 3, rng);
    CHECK(lstm_forward(a, p) == lstm_forward(b, p));
}

TEST_CASE("output stays strictly inside (0,1)") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const LstmParams p = LstmParams::init(2, 6, rng);
        Matrix seq = random_sequence(8, 2, rng);
        for (double& v : seq.data()) v *= 50.0; // extreme inputs
        const double prob = lstm_forward(seq, p);
        CHECK(prob > 0.0);
        CHECK(prob < 1.0);
    }
}

TEST_CASE("forward rejects dimension mismatches") {
    const LstmParams p = LstmParams::zeros(3, 4);
    Rng rng(4);
    const Matrix seq = random_sequence(5, 2, rng);
    CHECK_THROWS_AS(lstm_forward(seq, p), ModelError);
}

TEST_CASE("bptt gradient matches central finite differences") {
    Rng rng(42);
    // the pinned instance: 3 steps, hidden 4
    {
        const LstmParams p = LstmParams::init(3, 4, rng);
        const Matrix seq = random_sequence(3, 3, rng);
        CHECK(max_gradcheck_error(seq, 1.0, p) < 1e-4);
    }
    // randomized parameter draws
    for (int draw = 0; draw < 10; ++draw) {
        const LstmParams p = LstmParams::init(2, 3, rng);
        const Matrix seq = random_sequence(4, 2, rng);
        const double y = draw % 2 == 0 ? 1.0 : 0.0;
        CHECK(max_gradcheck_error(seq, y, p) < 1e-4);
    }
}

TEST_CASE("constant labels train to near-zero loss within 200 epochs") {
    Rng rng(7);
    std::vector<Matrix> seqs;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        seqs.push_back(random_sequence(6, 3, rng));
        labels.push_back(+1);
    }
    LstmConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden_dim = 4;
    cfg.sequence_length = 6;
    cfg.epochs = 200;
    cfg.learning_rate = 0.5;
    cfg.rng_seed = 11;
    const LstmParams p = lstm_fit(seqs, labels, cfg);
    CHECK(lstm_loss(seqs, labels, p) < 0.05);
}

TEST_CASE("zero epochs returns the seeded initialization unchanged") {
    Rng rng(9);
    std::vector<Matrix> seqs = {random_sequence(5, 3, rng)};
    std::vector<int> labels = {+1};
    LstmConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden_dim = 4;
    cfg.sequence_length = 5;
    cfg.epochs = 0;
    cfg.rng_seed = 123;
    const LstmParams fitted = lstm_fit(seqs, labels, cfg);
    Rng init_rng(123);
    const LstmParams expected = LstmParams::init(3, 4, init_rng);
    CHECK(fitted == expected);
}

TEST_CASE("divergence guard throws with a diagnostic") {
    Rng rng(10);
    std::vector<Matrix> seqs;
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) {
        seqs.push_back(random_sequence(4, 2, rng));
        labels.push_back(i % 2 == 0 ? +1 : -1);
    }
    LstmConfig cfg;
    cfg.input_dim = 2;
    cfg.hidden_dim = 3;
    cfg.sequence_length = 4;
    cfg.epochs = 500;
    cfg.learning_rate = 1e6; // guaranteed blow-up
    cfg.rng_seed = 5;
    CHECK_THROWS_AS(lstm_fit(seqs, labels, cfg), ModelError);
}

TEST_CASE("fit is bit-identical across the parallel and serial paths") {
    Rng rng(12);
    std::vector<Matrix> seqs;
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) {
        seqs.push_back(random_sequence(6, 3, rng));
        labels.push_back(rng.next_double() < 0.5 ? +1 : -1);
    }
    LstmConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden_dim = 5;
    cfg.sequence_length = 6;
    cfg.epochs = 10;
    cfg.learning_rate = 0.1;
    cfg.rng_seed = 77;

    par::set_enabled(true);
    const LstmParams a = lstm_fit(seqs, labels, cfg);
    par::set_enabled(false);
    const LstmParams b = lstm_fit(seqs, labels, cfg);
    par::set_enabled(true);
    CHECK(a == b);
}

TEST_CASE("lstm params serialize round-trips") {
    Rng rng(13);
    const LstmParams p = LstmParams::init(3, 4, rng);
    const LstmParams q = LstmParams::deserialize(p.serialize());
    CHECK(p == q);
}

TEST_CASE("mlp gradcheck and training") {
    Rng rng(14);
    // finite differences by perturbing one weight at a time
    MlpParams p = MlpParams::init(4, 5, 3, rng);
    std::vector<double> x(4);
    for (double& v : x) v = rng.normal();
    MlpParams grad = MlpParams::zeros(4, 5, 3);
    mlp_backward(x.data(), 1.0, p, grad);
    auto loss_of = [&](const MlpParams& q) {
        const double prob = mlp_forward(x.data(), q);
        return -std::log(prob);
    };
    const double eps = 1e-6;
    double worst = 0.0;
    for (std::size_t i = 0; i < p.w1.data().size(); ++i) {
        MlpParams up = p, dn = p;
        up.w1.data()[i] += eps;
        dn.w1.data()[i] -= eps;
        const double numeric = (loss_of(up) - loss_of(dn)) / (2 * eps);
        worst = std::max(worst, std::abs(numeric - grad.w1.data()[i]));
    }
    {
        MlpParams up = p, dn = p;
        up.b3 += eps;
        dn.b3 -= eps;
        worst = std::max(worst, std::abs((loss_of(up) - loss_of(dn)) / (2 * eps) - grad.b3));
    }
    CHECK(worst < 1e-6);

    // separable training data fits
    Matrix X(60, 2);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        const int label = i % 2 == 0 ? +1 : -1;
        X(i, 0) = (label > 0 ? 1.0 : -1.0) + 0.2 * rng.normal();
        X(i, 1) = rng.normal();
        y[i] = label;
    }
    const MlpParams fitted = mlp_fit(X, y, 8, 4, 300, 0.5, 3);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < 60; ++i)
        if ((mlp_forward(X.row(i), fitted) > 0.5 ? +1 : -1) == y[i]) ++hits;
    CHECK(hits >= 57);

    const MlpParams reloaded = MlpParams::deserialize(fitted.serialize());
    CHECK(reloaded == fitted);
}
