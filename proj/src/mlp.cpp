#include "daybt/learners/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "daybt/errors.hpp"
#include "daybt/learners/gbt.hpp" // sigmoid
#include "daybt/parallel.hpp"

namespace daybt {

MlpParams MlpParams::zeros(int input_dim, int hidden1, int hidden2) {
    MlpParams p;
    p.input_dim = input_dim;
    p.hidden1 = hidden1;
    p.hidden2 = hidden2;
    p.w1 = Matrix(static_cast<std::size_t>(hidden1), static_cast<std::size_t>(input_dim));
    p.w2 = Matrix(static_cast<std::size_t>(hidden2), static_cast<std::size_t>(hidden1));
    p.b1.assign(static_cast<std::size_t>(hidden1), 0.0);
    p.b2.assign(static_cast<std::size_t>(hidden2), 0.0);
    p.w3.assign(static_cast<std::size_t>(hidden2), 0.0);
    p.b3 = 0.0;
    return p;
}

MlpParams MlpParams::init(int input_dim, int hidden1, int hidden2, Rng& rng) {
    MlpParams p = zeros(input_dim, hidden1, hidden2);
    for (double& v : p.w1.data()) v = rng.uniform(-0.08, 0.08);
    for (double& v : p.w2.data()) v = rng.uniform(-0.08, 0.08);
    for (double& v : p.b1) v = rng.uniform(-0.08, 0.08);
    for (double& v : p.b2) v = rng.uniform(-0.08, 0.08);
    for (double& v : p.w3) v = rng.uniform(-0.08, 0.08);
    p.b3 = rng.uniform(-0.08, 0.08);
    return p;
}

void MlpParams::add_scaled(const MlpParams& other, double scale) {
    for (std::size_t i = 0; i < w1.data().size(); ++i) w1.data()[i] += scale * other.w1.data()[i];
    for (std::size_t i = 0; i < w2.data().size(); ++i) w2.data()[i] += scale * other.w2.data()[i];
    for (std::size_t i = 0; i < b1.size(); ++i) b1[i] += scale * other.b1[i];
    for (std::size_t i = 0; i < b2.size(); ++i) b2[i] += scale * other.b2[i];
    for (std::size_t i = 0; i < w3.size(); ++i) w3[i] += scale * other.w3[i];
    b3 += scale * other.b3;
}

namespace {

struct Activations {
    std::vector<double> h1, h2;
    double prob = 0.0;
};

Activations forward_acts(const double* x, const MlpParams& p) {
    Activations a;
    const auto H1 = static_cast<std::size_t>(p.hidden1);
    const auto H2 = static_cast<std::size_t>(p.hidden2);
    const auto I = static_cast<std::size_t>(p.input_dim);
    a.h1.resize(H1);
    a.h2.resize(H2);
    for (std::size_t r = 0; r < H1; ++r) {
        double acc = p.b1[r];
        const double* w = p.w1.row(r);
        for (std::size_t c = 0; c < I; ++c) acc += w[c] * x[c];
        a.h1[r] = std::tanh(acc);
    }
    for (std::size_t r = 0; r < H2; ++r) {
        double acc = p.b2[r];
        const double* w = p.w2.row(r);
        for (std::size_t c = 0; c < H1; ++c) acc += w[c] * a.h1[c];
        a.h2[r] = std::tanh(acc);
    }
    double logit = p.b3;
    for (std::size_t r = 0; r < H2; ++r) logit += p.w3[r] * a.h2[r];
    a.prob = sigmoid(logit);
    return a;
}

} // namespace

double mlp_forward(const double* x, const MlpParams& p) { return forward_acts(x, p).prob; }

double mlp_backward(const double* x, double y01, const MlpParams& p, MlpParams& grad) {
    const Activations a = forward_acts(x, p);
    const auto H1 = static_cast<std::size_t>(p.hidden1);
    const auto H2 = static_cast<std::size_t>(p.hidden2);
    const auto I = static_cast<std::size_t>(p.input_dim);

    const double dlogit = a.prob - y01;
    grad.b3 += dlogit;
    std::vector<double> dh2(H2);
    for (std::size_t r = 0; r < H2; ++r) {
        grad.w3[r] += dlogit * a.h2[r];
        dh2[r] = dlogit * p.w3[r] * (1.0 - a.h2[r] * a.h2[r]);
    }
    std::vector<double> dh1(H1, 0.0);
    for (std::size_t r = 0; r < H2; ++r) {
        grad.b2[r] += dh2[r];
        double* gw = grad.w2.row(r);
        const double* w = p.w2.row(r);
        for (std::size_t c = 0; c < H1; ++c) {
            gw[c] += dh2[r] * a.h1[c];
            dh1[c] += dh2[r] * w[c];
        }
    }
    for (std::size_t r = 0; r < H1; ++r) {
        const double d = dh1[r] * (1.0 - a.h1[r] * a.h1[r]);
        grad.b1[r] += d;
        double* gw = grad.w1.row(r);
        for (std::size_t c = 0; c < I; ++c) gw[c] += d * x[c];
    }
    return -(y01 * std::log(a.prob) + (1.0 - y01) * std::log(1.0 - a.prob));
}

double mlp_loss(const Matrix& X, const std::vector<int>& labels, const MlpParams& p) {
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double prob = mlp_forward(X.row(i), p);
        const double y = labels[i] > 0 ? 1.0 : 0.0;
        loss += -(y * std::log(prob) + (1.0 - y) * std::log(1.0 - prob));
    }
    return loss / static_cast<double>(X.rows());
}

namespace {

constexpr std::size_t kGradChunk = 32;

MlpParams fit_loop(MlpParams params, const Matrix& X, const std::vector<int>& labels, int epochs,
                   double learning_rate) {
    const std::size_t n = X.rows();
    const std::size_t chunks = (n + kGradChunk - 1) / kGradChunk;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::vector<MlpParams> partial(chunks,
                                       MlpParams::zeros(params.input_dim, params.hidden1,
                                                        params.hidden2));
        std::vector<double> partial_loss(chunks, 0.0);
        par::parallel_for(chunks, [&](std::size_t ci) {
            const std::size_t begin = ci * kGradChunk;
            const std::size_t end = std::min(n, begin + kGradChunk);
            for (std::size_t i = begin; i < end; ++i)
                partial_loss[ci] +=
                    mlp_backward(X.row(i), labels[i] > 0 ? 1.0 : 0.0, params, partial[ci]);
        });
        MlpParams grad = MlpParams::zeros(params.input_dim, params.hidden1, params.hidden2);
        double loss = 0.0;
        for (std::size_t ci = 0; ci < chunks; ++ci) {
            grad.add_scaled(partial[ci], 1.0);
            loss += partial_loss[ci];
        }
        if (!std::isfinite(loss / static_cast<double>(n)))
            throw ModelError("mlp fit diverged: non-finite loss at epoch " +
                             std::to_string(epoch + 1));
        params.add_scaled(grad, -learning_rate / static_cast<double>(n));
    }
    if (epochs > 0 && !std::isfinite(mlp_loss(X, labels, params)))
        throw ModelError("mlp fit diverged: non-finite loss after the final epoch");
    return params;
}

} // namespace

MlpParams mlp_fit(const Matrix& X, const std::vector<int>& labels, int hidden1, int hidden2,
                  int epochs, double learning_rate, std::uint64_t seed) {
    if (X.rows() == 0) throw ModelError("mlp fit: empty input");
    if (labels.size() != X.rows()) throw ModelError("mlp fit: label count mismatch");
    Rng rng(seed);
    return fit_loop(MlpParams::init(static_cast<int>(X.cols()), hidden1, hidden2, rng), X, labels,
                    epochs, learning_rate);
}

MlpParams mlp_fit_from(const MlpParams& start, const Matrix& X, const std::vector<int>& labels,
                       int epochs, double learning_rate) {
    if (X.rows() == 0) throw ModelError("mlp fit: empty input");
    if (static_cast<int>(X.cols()) != start.input_dim)
        throw ModelError("mlp fit: feature width changed between refits");
    return fit_loop(start, X, labels, epochs, learning_rate);
}

std::string MlpParams::serialize() const {
    char head[80];
    std::snprintf(head, sizeof head, "mlp v1 %d %d %d\n", input_dim, hidden1, hidden2);
    std::string out = head;
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out += buf;
    };
    for (double v : w1.data()) emit(v);
    for (double v : w2.data()) emit(v);
    for (double v : b1) emit(v);
    for (double v : b2) emit(v);
    for (double v : w3) emit(v);
    emit(b3);
    return out;
}

MlpParams MlpParams::deserialize(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw ModelError("mlp deserialize: empty input");
    int in_dim = 0, h1 = 0, h2 = 0;
    if (std::sscanf(line.c_str(), "mlp v1 %d %d %d", &in_dim, &h1, &h2) != 3)
        throw ModelError("mlp deserialize: bad header '" + line + "'");
    MlpParams p = zeros(in_dim, h1, h2);
    std::vector<double> flat;
    while (std::getline(ss, line))
        if (!line.empty()) flat.push_back(std::stod(line));
    const std::size_t want = p.w1.data().size() + p.w2.data().size() + p.b1.size() + p.b2.size() +
                             p.w3.size() + 1;
    if (flat.size() != want) throw ModelError("mlp deserialize: value count mismatch");
    std::size_t pos = 0;
    for (double& v : p.w1.data()) v = flat[pos++];
    for (double& v : p.w2.data()) v = flat[pos++];
    for (double& v : p.b1) v = flat[pos++];
    for (double& v : p.b2) v = flat[pos++];
    for (double& v : p.w3) v = flat[pos++];
    p.b3 = flat[pos];
    return p;
}

} // namespace daybt
