#pragma once

#include <span>
#include <vector>

namespace fano {

/* Integer-valued affine form c0 + sum coeffs[i] * x[i] over index variables. */
struct LinearForm {
    long constant = 0;
    std::vector<long> coeffs;

    LinearForm() = default;
    explicit LinearForm(std::size_t nvars) : coeffs(nvars, 0) {}

    long eval(std::span<const long> x) const {
        long v = constant;
        for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * x[i];
        return v;
    }

    bool is_zero() const {
        if (constant != 0) return false;
        for (long c : coeffs)
            if (c != 0) return false;
        return true;
    }

    bool operator==(const LinearForm&) const = default;
};

}  // namespace fano
