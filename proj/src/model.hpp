#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ep {

// Parameter pair of the two-parameter random partition model.
// Valid domain: alpha in [0, 1), theta > -alpha, both finite.
struct Model {
    double alpha;
    double theta;

    Model(double a, double t) : alpha(a), theta(t) {
        if (!std::isfinite(a) || !std::isfinite(t) || a < 0.0 || a >= 1.0 || t <= -a)
            throw std::invalid_argument(
                "invalid parameters: require \xce\xb1\xe2\x88\x88[0,1), \xce\xb8>-\xce\xb1 "
                "(got alpha=" + std::to_string(a) + ", theta=" + std::to_string(t) + ")");
    }

    // Many closed forms below need alpha > 0; the sequential sampler does not.
    void require_positive_alpha(const char* what) const {
        if (alpha <= 0.0)
            throw std::domain_error(std::string(what) + " requires alpha > 0");
    }
};

}  // namespace ep
