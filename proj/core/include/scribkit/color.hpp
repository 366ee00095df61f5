#pragma once

#include <array>

namespace scribkit {

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct Hsv {
    double h = 0.0;  // degrees in [0, 360)
    double s = 0.0;  // [0, 1]
    double v = 0.0;  // [0, 1]
};

// sRGB in [0,1] (D65 white) to CIELAB.
Lab rgb_to_lab(double r, double g, double b);

Hsv rgb_to_hsv(double r, double g, double b);

inline double lab_distance_sq(const Lab& x, const Lab& y) {
    const double dl = x.l - y.l;
    const double da = x.a - y.a;
    const double db = x.b - y.b;
    return dl * dl + da * da + db * db;
}

}  // namespace scribkit
