#include "daybt/learners/lstm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "daybt/errors.hpp"
#include "daybt/learners/gbt.hpp" // sigmoid
#include "daybt/parallel.hpp"

namespace daybt {

namespace {

void fill_uniform(Matrix& m, Rng& rng) {
    for (double& v : m.data()) v = rng.uniform(-0.08, 0.08);
}

void fill_uniform(std::vector<double>& v, Rng& rng) {
    for (double& x : v) x = rng.uniform(-0.08, 0.08);
}

// z = W x + U h + b for one gate
void gate_preact(const Matrix& W, const Matrix& U, const std::vector<double>& b, const double* x,
                 const std::vector<double>& h, std::vector<double>& z) {
    const std::size_t H = W.rows(), I = W.cols();
    for (std::size_t r = 0; r < H; ++r) {
        double acc = b[r];
        const double* wr = W.row(r);
        for (std::size_t c = 0; c < I; ++c) acc += wr[c] * x[c];
        const double* ur = U.row(r);
        for (std::size_t c = 0; c < H; ++c) acc += ur[c] * h[c];
        z[r] = acc;
    }
}

struct ForwardTrace {
    // per step: gate activations, cell state, tanh(cell), hidden state
    std::vector<std::vector<double>> in, fg, out, cand, cell, tcell, hidden;
    double probability = 0.0;
};

ForwardTrace forward_trace(const Matrix& seq, const LstmParams& p) {
    const std::size_t T = seq.rows();
    const auto H = static_cast<std::size_t>(p.hidden_dim);
    ForwardTrace tr;
    for (auto* v : {&tr.in, &tr.fg, &tr.out, &tr.cand, &tr.cell, &tr.tcell, &tr.hidden})
        v->assign(T, std::vector<double>(H, 0.0));

    std::vector<double> h(H, 0.0), c(H, 0.0), z(H, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const double* x = seq.row(t);
        gate_preact(p.w_input, p.u_input, p.b_input, x, h, z);
        for (std::size_t r = 0; r < H; ++r) tr.in[t][r] = sigmoid(z[r]);
        gate_preact(p.w_forget, p.u_forget, p.b_forget, x, h, z);
        for (std::size_t r = 0; r < H; ++r) tr.fg[t][r] = sigmoid(z[r]);
        gate_preact(p.w_output, p.u_output, p.b_output, x, h, z);
        for (std::size_t r = 0; r < H; ++r) tr.out[t][r] = sigmoid(z[r]);
        gate_preact(p.w_cell, p.u_cell, p.b_cell, x, h, z);
        for (std::size_t r = 0; r < H; ++r) tr.cand[t][r] = std::tanh(z[r]);
        for (std::size_t r = 0; r < H; ++r) {
            c[r] = tr.fg[t][r] * c[r] + tr.in[t][r] * tr.cand[t][r];
            tr.cell[t][r] = c[r];
            tr.tcell[t][r] = std::tanh(c[r]);
            h[r] = tr.out[t][r] * tr.tcell[t][r];
            tr.hidden[t][r] = h[r];
        }
    }
    double logit = p.head_b;
    for (std::size_t r = 0; r < H; ++r) logit += p.head_w[r] * h[r];
    tr.probability = sigmoid(logit);
    return tr;
}

} // namespace

LstmParams LstmParams::zeros(int input_dim, int hidden_dim) {
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    const auto H = static_cast<std::size_t>(hidden_dim);
    const auto I = static_cast<std::size_t>(input_dim);
    p.w_input = p.w_forget = p.w_output = p.w_cell = Matrix(H, I);
    p.u_input = p.u_forget = p.u_output = p.u_cell = Matrix(H, H);
    p.b_input.assign(H, 0.0);
    p.b_forget.assign(H, 0.0);
    p.b_output.assign(H, 0.0);
    p.b_cell.assign(H, 0.0);
    p.head_w.assign(H, 0.0);
    p.head_b = 0.0;
    return p;
}

LstmParams LstmParams::init(int input_dim, int hidden_dim, Rng& rng) {
    LstmParams p = zeros(input_dim, hidden_dim);
    fill_uniform(p.w_input, rng);
    fill_uniform(p.w_forget, rng);
    fill_uniform(p.w_output, rng);
    fill_uniform(p.w_cell, rng);
    fill_uniform(p.u_input, rng);
    fill_uniform(p.u_forget, rng);
    fill_uniform(p.u_output, rng);
    fill_uniform(p.u_cell, rng);
    fill_uniform(p.b_input, rng);
    p.b_forget.assign(static_cast<std::size_t>(hidden_dim), 1.0);
    fill_uniform(p.b_output, rng);
    fill_uniform(p.b_cell, rng);
    fill_uniform(p.head_w, rng);
    p.head_b = rng.uniform(-0.08, 0.08);
    return p;
}

std::size_t LstmParams::flat_size() const {
    const auto H = static_cast<std::size_t>(hidden_dim);
    const auto I = static_cast<std::size_t>(input_dim);
    return 4 * (H * I + H * H + H) + H + 1;
}

std::vector<double> LstmParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(flat_size());
    for (const Matrix* m : {&w_input, &w_forget, &w_output, &w_cell, &u_input, &u_forget,
                            &u_output, &u_cell})
        flat.insert(flat.end(), m->data().begin(), m->data().end());
    for (const std::vector<double>* v : {&b_input, &b_forget, &b_output, &b_cell, &head_w})
        flat.insert(flat.end(), v->begin(), v->end());
    flat.push_back(head_b);
    return flat;
}

void LstmParams::from_flat(const std::vector<double>& flat) {
    if (flat.size() != flat_size()) throw ModelError("lstm params: flat size mismatch");
    std::size_t pos = 0;
    for (Matrix* m : {&w_input, &w_forget, &w_output, &w_cell, &u_input, &u_forget, &u_output,
                      &u_cell}) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() + static_cast<std::ptrdiff_t>(pos + m->data().size()),
                  m->data().begin());
        pos += m->data().size();
    }
    for (std::vector<double>* v : {&b_input, &b_forget, &b_output, &b_cell, &head_w}) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() + static_cast<std::ptrdiff_t>(pos + v->size()), v->begin());
        pos += v->size();
    }
    head_b = flat[pos];
}

void LstmParams::add_scaled(const LstmParams& other, double scale) {
    auto add_m = [scale](Matrix& a, const Matrix& b) {
        for (std::size_t i = 0; i < a.data().size(); ++i) a.data()[i] += scale * b.data()[i];
    };
    auto add_v = [scale](std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
    };
    add_m(w_input, other.w_input);
    add_m(w_forget, other.w_forget);
    add_m(w_output, other.w_output);
    add_m(w_cell, other.w_cell);
    add_m(u_input, other.u_input);
    add_m(u_forget, other.u_forget);
    add_m(u_output, other.u_output);
    add_m(u_cell, other.u_cell);
    add_v(b_input, other.b_input);
    add_v(b_forget, other.b_forget);
    add_v(b_output, other.b_output);
    add_v(b_cell, other.b_cell);
    add_v(head_w, other.head_w);
    head_b += scale * other.head_b;
}

double lstm_forward(const Matrix& sequence, const LstmParams& params) {
    if (static_cast<int>(sequence.cols()) != params.input_dim)
        throw ModelError("lstm forward: sequence width " + std::to_string(sequence.cols()) +
                         " != input_dim " + std::to_string(params.input_dim));
    return forward_trace(sequence, params).probability;
}

double lstm_backward(const Matrix& sequence, double y01, const LstmParams& p, LstmParams& grad) {
    const ForwardTrace tr = forward_trace(sequence, p);
    const std::size_t T = sequence.rows();
    const auto H = static_cast<std::size_t>(p.hidden_dim);
    const auto I = static_cast<std::size_t>(p.input_dim);

    const double dlogit = tr.probability - y01;
    grad.head_b += dlogit;
    std::vector<double> dh(H), dc(H, 0.0);
    for (std::size_t r = 0; r < H; ++r) {
        grad.head_w[r] += dlogit * tr.hidden[T - 1][r];
        dh[r] = dlogit * p.head_w[r];
    }

    std::vector<double> dpre_i(H), dpre_f(H), dpre_o(H), dpre_g(H);
    for (std::size_t t = T; t-- > 0;) {
        const auto& it = tr.in[t];
        const auto& ft = tr.fg[t];
        const auto& ot = tr.out[t];
        const auto& gt = tr.cand[t];
        const auto& tct = tr.tcell[t];
        for (std::size_t r = 0; r < H; ++r) {
            const double dct = dc[r] + dh[r] * ot[r] * (1.0 - tct[r] * tct[r]);
            const double cprev = t > 0 ? tr.cell[t - 1][r] : 0.0;
            dpre_o[r] = dh[r] * tct[r] * ot[r] * (1.0 - ot[r]);
            dpre_f[r] = dct * cprev * ft[r] * (1.0 - ft[r]);
            dpre_i[r] = dct * gt[r] * it[r] * (1.0 - it[r]);
            dpre_g[r] = dct * it[r] * (1.0 - gt[r] * gt[r]);
            dc[r] = dct * ft[r];
        }
        const double* x = sequence.row(t);
        const std::vector<double>* hprev = t > 0 ? &tr.hidden[t - 1] : nullptr;
        auto accumulate = [&](Matrix& dW, Matrix& dU, std::vector<double>& db,
                              const std::vector<double>& dpre) {
            for (std::size_t r = 0; r < H; ++r) {
                const double d = dpre[r];
                db[r] += d;
                double* dwr = dW.row(r);
                for (std::size_t c = 0; c < I; ++c) dwr[c] += d * x[c];
                if (hprev) {
                    double* dur = dU.row(r);
                    for (std::size_t c = 0; c < H; ++c) dur[c] += d * (*hprev)[c];
                }
            }
        };
        accumulate(grad.w_input, grad.u_input, grad.b_input, dpre_i);
        accumulate(grad.w_forget, grad.u_forget, grad.b_forget, dpre_f);
        accumulate(grad.w_output, grad.u_output, grad.b_output, dpre_o);
        accumulate(grad.w_cell, grad.u_cell, grad.b_cell, dpre_g);

        if (t > 0) {
            for (std::size_t r = 0; r < H; ++r) dh[r] = 0.0;
            auto back_h = [&](const Matrix& U, const std::vector<double>& dpre) {
                for (std::size_t r = 0; r < H; ++r) {
                    const double d = dpre[r];
                    const double* ur = U.row(r);
                    for (std::size_t c = 0; c < H; ++c) dh[c] += ur[c] * d;
                }
            };
            back_h(p.u_input, dpre_i);
            back_h(p.u_forget, dpre_f);
            back_h(p.u_output, dpre_o);
            back_h(p.u_cell, dpre_g);
        }
    }
    return -(y01 * std::log(tr.probability) + (1.0 - y01) * std::log(1.0 - tr.probability));
}

double lstm_loss(const std::vector<Matrix>& sequences, const std::vector<int>& labels,
                 const LstmParams& params) {
    double loss = 0.0;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const double prob = lstm_forward(sequences[i], params);
        const double y = labels[i] > 0 ? 1.0 : 0.0;
        loss += -(y * std::log(prob) + (1.0 - y) * std::log(1.0 - prob));
    }
    return loss / static_cast<double>(sequences.size());
}

namespace {

// Fixed-size chunks accumulated independently and combined in chunk order:
// the floating-point sum is identical for any thread count.
constexpr std::size_t kGradChunk = 32;

struct BatchGrad {
    LstmParams grad;
    double loss = 0.0; // mean BCE at the current parameters
};

BatchGrad batch_gradient(const LstmParams& p, const std::vector<Matrix>& sequences,
                         const std::vector<int>& labels) {
    const std::size_t n = sequences.size();
    const std::size_t chunks = (n + kGradChunk - 1) / kGradChunk;
    std::vector<LstmParams> partial(chunks, LstmParams::zeros(p.input_dim, p.hidden_dim));
    std::vector<double> partial_loss(chunks, 0.0);
    par::parallel_for(chunks, [&](std::size_t ci) {
        const std::size_t begin = ci * kGradChunk;
        const std::size_t end = std::min(n, begin + kGradChunk);
        for (std::size_t i = begin; i < end; ++i)
            partial_loss[ci] +=
                lstm_backward(sequences[i], labels[i] > 0 ? 1.0 : 0.0, p, partial[ci]);
    });
    BatchGrad out{LstmParams::zeros(p.input_dim, p.hidden_dim), 0.0};
    for (std::size_t ci = 0; ci < chunks; ++ci) {
        out.grad.add_scaled(partial[ci], 1.0);
        out.loss += partial_loss[ci];
    }
    out.loss /= static_cast<double>(n);
    return out;
}

LstmParams fit_loop(LstmParams params, const std::vector<Matrix>& sequences,
                    const std::vector<int>& labels, int epochs, double learning_rate) {
    const auto n = static_cast<double>(sequences.size());
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const BatchGrad batch = batch_gradient(params, sequences, labels);
        if (!std::isfinite(batch.loss))
            throw ModelError("lstm fit diverged: non-finite loss at epoch " +
                             std::to_string(epoch + 1));
        params.add_scaled(batch.grad, -learning_rate / n);
    }
    if (epochs > 0 && !std::isfinite(lstm_loss(sequences, labels, params)))
        throw ModelError("lstm fit diverged: non-finite loss after the final epoch");
    return params;
}

} // namespace

LstmParams lstm_fit(const std::vector<Matrix>& sequences, const std::vector<int>& labels,
                    const LstmConfig& cfg) {
    if (sequences.empty()) throw ModelError("lstm fit: no sequences");
    if (sequences.size() != labels.size()) throw ModelError("lstm fit: label count mismatch");
    for (const Matrix& s : sequences)
        if (static_cast<int>(s.rows()) != cfg.sequence_length ||
            static_cast<int>(s.cols()) != cfg.input_dim)
            throw ModelError("lstm fit: sequence shape mismatch");
    Rng rng(cfg.rng_seed);
    LstmParams params = LstmParams::init(cfg.input_dim, cfg.hidden_dim, rng);
    return fit_loop(std::move(params), sequences, labels, cfg.epochs, cfg.learning_rate);
}

LstmParams lstm_fit_from(const LstmParams& start, const std::vector<Matrix>& sequences,
                         const std::vector<int>& labels, int epochs, double learning_rate) {
    if (sequences.empty()) throw ModelError("lstm fit: no sequences");
    return fit_loop(start, sequences, labels, epochs, learning_rate);
}

std::string LstmParams::serialize() const {
    char head[64];
    std::snprintf(head, sizeof head, "lstm v1 %d %d\n", input_dim, hidden_dim);
    std::string out = head;
    char buf[32];
    for (double v : to_flat()) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out += buf;
    }
    return out;
}

LstmParams LstmParams::deserialize(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw ModelError("lstm deserialize: empty input");
    int in_dim = 0, hid = 0;
    if (std::sscanf(line.c_str(), "lstm v1 %d %d", &in_dim, &hid) != 2)
        throw ModelError("lstm deserialize: bad header '" + line + "'");
    LstmParams p = zeros(in_dim, hid);
    std::vector<double> flat;
    flat.reserve(p.flat_size());
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        flat.push_back(std::stod(line));
    }
    p.from_flat(flat);
    return p;
}

} // namespace daybt
