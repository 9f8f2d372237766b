#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daybt/learners/matrix.hpp"
#include "daybt/rng.hpp"

namespace daybt {

// Two-hidden-layer feedforward net with tanh activations and a logistic
// output; trained exactly like the LSTM (full-batch gradient descent, fixed
// learning rate, seeded uniform init).
struct MlpParams {
    int input_dim = 0;
    int hidden1 = 0;
    int hidden2 = 0;
    Matrix w1, w2;             // hidden1 x input, hidden2 x hidden1
    std::vector<double> b1, b2;
    std::vector<double> w3;    // hidden2
    double b3 = 0.0;

    static MlpParams init(int input_dim, int hidden1, int hidden2, Rng& rng);
    static MlpParams zeros(int input_dim, int hidden1, int hidden2);

    void add_scaled(const MlpParams& other, double scale);

    std::string serialize() const;
    static MlpParams deserialize(const std::string& text);

    bool operator==(const MlpParams&) const = default;
};

double mlp_forward(const double* x, const MlpParams& p);

// Accumulates the gradient; returns the sample's BCE loss.
double mlp_backward(const double* x, double y01, const MlpParams& p, MlpParams& grad);

double mlp_loss(const Matrix& X, const std::vector<int>& labels, const MlpParams& p);

MlpParams mlp_fit(const Matrix& X, const std::vector<int>& labels, int hidden1, int hidden2,
                  int epochs, double learning_rate, std::uint64_t seed);

MlpParams mlp_fit_from(const MlpParams& start, const Matrix& X, const std::vector<int>& labels,
                       int epochs, double learning_rate);

} // namespace daybt
