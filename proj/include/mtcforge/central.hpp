#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mod2.hpp"
#include "phase.hpp"

namespace mtcforge {

// A homomorphism sigma from pi_1 to the center {+-1} of SL(2,C), given by its values on the
// generators, together with the induced map on the ordered character list. An empty image
// slot means the twisted character is not in the list.
struct CentralRep {
    BitVector sigma;
    std::vector<std::optional<std::size_t>> image;
    std::vector<RationalPhase> cs_shift;

    bool is_trivial() const {
        for (auto b : sigma)
            if (b) return false;
        return true;
    }

    bool keeps_labels() const {
        for (const auto& i : image)
            if (!i) return false;
        return true;
    }
};

}  // namespace mtcforge
