#pragma once

#include <string>
#include <vector>

#include "msf/matpoly.hpp"
#include "msf/nme.hpp"
#include "msf/surd.hpp"

namespace msf {

// expected determinant zero on the unit circle (all corpus zeros are real)
struct CircleZeroSpec {
    double re;
    int multiplicity;
};

// One worked instance: exact Laurent coefficients P_0..P_m, the exact
// maximal solution with its spectral factor, and the expected closed-loop
// structure. For m > 1 the stored x/h describe the one-lag block embedding.
struct Example {
    int id = 0;
    std::string name;
    std::size_t r = 0;
    int m = 0;
    std::vector<SurdMatrix> p;  // P_0 .. P_m
    SurdMatrix x;
    std::vector<SurdMatrix> h;  // H_0 .. H_m
    std::vector<SurdMatrix> g;  // orthogonal completion G_0, G_1 when known
    int chain = 0;              // largest unit-circle Jordan chain (0: interior spectrum)
    std::vector<CircleZeroSpec> circle_zeros_expected;
    std::string note;

    // float P(z) with the mirrored coefficients filled in
    MatLaurentPoly laurent() const;
    // float equation data; block-embedded to one lag when m > 1
    NmeProblem problem() const;
};

// exact one-lag data: the entry itself for m = 1, its block embedding otherwise
struct ExactEmbedding {
    SurdMatrix p0, p1, x, h0, h1;
};
ExactEmbedding exact_embedding(const Example& ex);

const std::vector<Example>& corpus();
const Example& example(int id);  // ids 1..7, throws std::out_of_range

// the scalar entry rescaled to a unit constant coefficient
Example scalar_unit_normalization();

}  // namespace msf
