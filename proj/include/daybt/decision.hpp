#pragma once

namespace daybt {

// Per-day signal. scale 0 encodes a closed position regardless of direction;
// the effective position is direction * scale.
struct Decision {
    int direction = +1; // +1 long, -1 short
    double scale = 1.0; // {0, 1} in practice, [0, 1] supported

    double position() const { return direction * scale; }
    bool open() const { return scale > 0.0; }

    bool operator==(const Decision&) const = default;
};

} // namespace daybt
