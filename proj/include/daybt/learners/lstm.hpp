#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daybt/learners/matrix.hpp"
#include "daybt/rng.hpp"

namespace daybt {

struct LstmConfig {
    int input_dim = 3;
    int hidden_dim = 16;
    int sequence_length = 20;
    int epochs = 80;
    double learning_rate = 0.05;
    std::uint64_t rng_seed = 0;
};

// Single-layer LSTM (input/forget/output gates, tanh candidate) with a
// scalar logistic head on the final hidden state.
struct LstmParams {
    int input_dim = 0;
    int hidden_dim = 0;
    Matrix w_input, w_forget, w_output, w_cell; // hidden x input
    Matrix u_input, u_forget, u_output, u_cell; // hidden x hidden
    std::vector<double> b_input, b_forget, b_output, b_cell;
    std::vector<double> head_w;
    double head_b = 0.0;

    // uniform(-0.08, 0.08) weights, forget-gate bias 1.0
    static LstmParams init(int input_dim, int hidden_dim, Rng& rng);
    static LstmParams zeros(int input_dim, int hidden_dim);

    std::size_t flat_size() const;
    std::vector<double> to_flat() const;
    void from_flat(const std::vector<double>& flat);

    void add_scaled(const LstmParams& other, double scale);

    std::string serialize() const;
    static LstmParams deserialize(const std::string& text);

    bool operator==(const LstmParams&) const = default;
};

// Probability in (0, 1) from a T x input_dim sequence (zero initial state).
double lstm_forward(const Matrix& sequence, const LstmParams& params);

// Accumulates d BCE(forward(sequence), y01) / d params into grad; returns
// the sample's BCE loss at the current parameters.
double lstm_backward(const Matrix& sequence, double y01, const LstmParams& params,
                     LstmParams& grad);

// Mean binary cross-entropy over the batch.
double lstm_loss(const std::vector<Matrix>& sequences, const std::vector<int>& labels,
                 const LstmParams& params);

// Full-batch gradient descent with a fixed learning rate; deterministic for
// a given seed, including under OpenMP (per-chunk gradient accumulation is
// combined in a fixed order). Labels are +1/-1. Throws ModelError if the
// loss turns non-finite.
LstmParams lstm_fit(const std::vector<Matrix>& sequences, const std::vector<int>& labels,
                    const LstmConfig& cfg);

// Warm-start variant used by daily refits: starts from `start` instead of a
// fresh seeded initialization.
LstmParams lstm_fit_from(const LstmParams& start, const std::vector<Matrix>& sequences,
                         const std::vector<int>& labels, int epochs, double learning_rate);

} // namespace daybt
