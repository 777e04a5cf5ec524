#pragma once

#include "iwasawa/model.hpp"

#include <random>

namespace testutil {

inline std::mt19937_64 make_rng(uint64_t seed = 42) { return std::mt19937_64(seed); }

inline iwasawa::Vec rand_vec(const iwasawa::Model& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    iwasawa::Vec v(m.dim());
    for (int i = 0; i < m.dim(); ++i) v[i] = d(rng);
    return v;
}

inline iwasawa::Vec rand_unit(const iwasawa::Model& m, std::mt19937_64& rng) {
    iwasawa::Vec v = rand_vec(m, rng);
    while (v.norm() < 1e-3) v = rand_vec(m, rng);
    return v / v.norm();
}

inline iwasawa::Vec rand_unit_galpha(const iwasawa::Model& m, std::mt19937_64& rng) {
    iwasawa::Vec v = rand_vec(m, rng);
    v[0] = 0.0;
    v[m.z_index()] = 0.0;
    while (v.norm() < 1e-3) {
        v = rand_vec(m, rng);
        v[0] = 0.0;
        v[m.z_index()] = 0.0;
    }
    return v / v.norm();
}

} // namespace testutil
