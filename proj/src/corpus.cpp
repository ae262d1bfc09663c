#include "msf/corpus.hpp"

#include <stdexcept>

namespace msf {

namespace {

SurdMatrix sm(std::size_t r, std::size_t c, const std::vector<std::string>& e) {
    return SurdMatrix::parse(r, c, e);
}

Example make_ex1() {
    Example e;
    e.id = 1;
    e.name = "two-lag-banded";
    e.r = 2;
    e.m = 2;
    e.p = {sm(2, 2, {"1", "0", "0", "9"}),
           sm(2, 2, {"0", "0", "0", "-2"}),
           sm(2, 2, {"0", "0", "2", "0"})};
    e.x = sm(4, 4, {"8/17", "2/17",   "-2/17", "0",
                    "2/17", "145/17", "8/17",  "-2",
                    "-2/17", "8/17",  "9/17",  "0",
                    "0",     "-2",    "0",     "9"});
    e.h = {sm(2, 2, {"4/s34", "0", "1/s34", "17/s34"}),
           sm(2, 2, {"-1/s34", "1/s34", "0", "-4/s34"}),
           sm(2, 2, {"0", "4/s34", "0", "0"})};
    e.chain = 0;
    e.note = "determinant zeros at 2 and 1/2; interior closed loop, quadratic Newton";
    return e;
}

Example make_ex2() {
    Example e;
    e.id = 2;
    e.name = "scalar-averaging";
    e.r = 1;
    e.m = 1;
    e.p = {sm(1, 1, {"2"}), sm(1, 1, {"1"})};
    e.x = sm(1, 1, {"1"});
    e.h = {sm(1, 1, {"1"}), sm(1, 1, {"1"})};
    e.chain = 1;
    e.circle_zeros_expected = {{-1.0, 2}};
    e.note = "double zero at z = -1; both iterations slow to first order";
    return e;
}

Example make_ex3() {
    Example e;
    e.id = 3;
    e.name = "integer-triangular";
    e.r = 2;
    e.m = 1;
    e.p = {sm(2, 2, {"6", "22", "22", "84"}), sm(2, 2, {"2", "7", "11", "38"})};
    e.x = sm(2, 2, {"1", "5", "5", "26"});
    e.h = {sm(2, 2, {"1", "0", "5", "1"}), sm(2, 2, {"2", "1", "7", "3"})};
    e.chain = 1;
    e.circle_zeros_expected = {{-1.0, 2}, {1.0, 2}};
    e.note = "double zeros at both z = 1 and z = -1, each in a length-1 chain";
    return e;
}

Example make_ex4() {
    Example e;
    e.id = 4;
    e.name = "root-two-multifilter";
    e.r = 2;
    e.m = 1;
    e.p = {SurdMatrix::identity(2),
           sm(2, 2, {"1/2", "s2/4", "-s2/4", "0"})};
    e.x = sm(2, 2, {"1/2", "-s2/4", "-s2/4", "1/2"});
    e.h = {sm(2, 2, {"s2/2", "0", "-1/2", "1/2"}),
           sm(2, 2, {"s2/2", "0", "1/2", "1/2"})};
    e.g = {sm(2, 2, {"0", "s2/2", "1/2", "1/2"}),
           sm(2, 2, {"0", "-s2/2", "-1/2", "1/2"})};
    e.chain = 2;
    e.circle_zeros_expected = {{-1.0, 4}};
    e.note = "orthogonal filter pair; length-2 chain at z = -1";
    return e;
}

Example make_ex5() {
    Example e;
    e.id = 5;
    e.name = "root-seven-multifilter";
    e.r = 2;
    e.m = 1;
    e.p = {SurdMatrix::identity(2),
           sm(2, 2, {"1/2", "-1/8-s7/8", "1/8+s7/8", "-s7/8"})};
    e.x = sm(2, 2, {"1/2", "1/8+s7/8", "1/8+s7/8", "1/2"});
    e.h = {sm(2, 2, {"s2/2", "0", "s2/8+s14/8", "-s2/8+s14/8"}),
           sm(2, 2, {"s2/2", "0", "-s2/8-s14/8", "-s2/8+s14/8"})};
    e.g = {sm(2, 2, {"0", "s2/2", "-s2/8+s14/8", "-s2/8-s14/8"}),
           sm(2, 2, {"0", "-s2/2", "s2/8-s14/8", "-s2/8-s14/8"})};
    e.chain = 2;
    e.circle_zeros_expected = {{-1.0, 4}};
    e.note = "orthogonal filter pair; factor entries live in q(s2, s7)";
    return e;
}

Example make_ex6() {
    Example e;
    e.id = 6;
    e.name = "root-three-polyphase";
    e.r = 2;
    e.m = 1;
    e.p = {SurdMatrix::identity(2),
           sm(2, 2, {"1/2", "-s3/4", "s3/4", "-1/4"})};
    e.x = sm(2, 2, {"1/2", "s3/4", "s3/4", "1/2"});
    e.h = {sm(2, 2, {"s2/2", "0", "s6/4", "s2/4"}),
           sm(2, 2, {"s2/2", "0", "-s6/4", "s2/4"})};
    e.chain = 2;
    e.circle_zeros_expected = {{-1.0, 4}};
    e.note = "order-2 polyphase block; length-2 chain at z = -1";
    return e;
}

Example make_ex7() {
    Example e;
    e.id = 7;
    e.name = "five-chain-polyphase";
    e.r = 5;
    e.m = 1;
    e.p = {SurdMatrix::identity(5),
           sm(5, 5, {"1/2",    "s3/4",   "0",       "-s7/16",    "0",
                     "-s3/4",  "-1/4",   "s15/16",  "s21/16",    "-s3/32",
                     "0",      "-s15/16", "-7/16",  "-s35/32",   "3*s5/32",
                     "s7/16",  "s21/16", "s35/32",  "-5/32",     "-39*s7/256",
                     "0",      "s3/32",  "3*s5/32", "39*s7/256", "53/256"})};
    e.x = sm(5, 5, {"1/2",    "-s3/4",   "0",       "s7/16",      "0",
                    "-s3/4",  "1/2",     "-s15/16", "0",          "s3/32",
                    "0",      "-s15/16", "1/2",     "-s35/16",    "0",
                    "s7/16",  "0",       "-s35/16", "1/2",        "-21*s7/256",
                    "0",      "s3/32",   "0",       "-21*s7/256", "1/2"});
    e.h = {sm(5, 5, {"s2/2",   "0",      "0",        "0",        "0",
                     "-s6/4",  "s2/4",   "0",        "0",        "0",
                     "0",      "-s30/8", "s2/8",     "0",        "0",
                     "s14/16", "s42/16", "-s70/16",  "s2/16",    "0",
                     "0",      "s6/16",  "3*s10/16", "3*s14/32", "s2/32"}),
           sm(5, 5, {"s2/2",    "0",       "0",        "0",         "0",
                     "s6/4",    "s2/4",    "0",        "0",         "0",
                     "0",       "s30/8",   "s2/8",     "0",         "0",
                     "-s14/16", "s42/16",  "s70/16",   "s2/16",     "0",
                     "0",       "-s6/16",  "3*s10/16", "-3*s14/32", "s2/32"})};
    e.chain = 5;
    e.circle_zeros_expected = {{-1.0, 10}};
    e.note = "order-5 polyphase block; length-5 chain drives the Newton factor "
             "2^(-1/5), past what double precision resolves";
    return e;
}

std::vector<Example> make_corpus() {
    return {make_ex1(), make_ex2(), make_ex3(), make_ex4(),
            make_ex5(), make_ex6(), make_ex7()};
}

}  // namespace

MatLaurentPoly Example::laurent() const {
    MatLaurentPoly q(r);
    q.set(0, to_dense(p[0]));
    for (int k = 1; k <= m; ++k) {
        const DenseMatrix c = to_dense(p[static_cast<std::size_t>(k)]);
        q.set(k, c);
        q.set(-k, c.t());
    }
    return q;
}

NmeProblem Example::problem() const {
    NmeProblem prob;
    prob.label = name;
    if (m == 1) {
        prob.p0 = to_dense(p[0]);
        prob.p1 = to_dense(p[1]);
    } else {
        const EmbeddedPair pair = block_embed(laurent());
        prob.p0 = pair.p0;
        prob.p1 = pair.p1;
    }
    return prob;
}

ExactEmbedding exact_embedding(const Example& ex) {
    if (ex.m == 1) return {ex.p[0], ex.p[1], ex.x, ex.h[0], ex.h[1]};

    const std::size_t r = ex.r;
    const std::size_t mm = static_cast<std::size_t>(ex.m);
    const std::size_t d = mm * r;
    ExactEmbedding out;
    out.p0 = SurdMatrix(d, d);
    out.p1 = SurdMatrix(d, d);
    out.h0 = SurdMatrix(d, d);
    out.h1 = SurdMatrix(d, d);
    out.x = ex.x;
    auto coeff = [&](long k) -> SurdMatrix {
        if (k >= 0 && k <= ex.m) return ex.p[static_cast<std::size_t>(k)];
        if (k < 0 && -k <= ex.m) return ex.p[static_cast<std::size_t>(-k)].t();
        return SurdMatrix(r, r);
    };
    auto factor = [&](long k) -> SurdMatrix {
        if (k >= 0 && k <= ex.m) return ex.h[static_cast<std::size_t>(k)];
        return SurdMatrix(r, r);
    };
    for (std::size_t bi = 0; bi < mm; ++bi)
        for (std::size_t bj = 0; bj < mm; ++bj) {
            const SurdMatrix c0 = coeff(static_cast<long>(bj) - static_cast<long>(bi));
            const SurdMatrix c1 =
                coeff(ex.m + static_cast<long>(bj) - static_cast<long>(bi));
            const SurdMatrix f0 = factor(static_cast<long>(bi) - static_cast<long>(bj));
            const SurdMatrix f1 =
                factor(ex.m + static_cast<long>(bi) - static_cast<long>(bj));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    out.p0(bi * r + i, bj * r + j) = c0(i, j);
                    out.p1(bi * r + i, bj * r + j) = c1(i, j);
                    out.h0(bi * r + i, bj * r + j) = f0(i, j);
                    out.h1(bi * r + i, bj * r + j) = f1(i, j);
                }
        }
    return out;
}

const std::vector<Example>& corpus() {
    static const std::vector<Example> all = make_corpus();
    return all;
}

const Example& example(int id) {
    const std::vector<Example>& all = corpus();
    if (id < 1 || static_cast<std::size_t>(id) > all.size())
        throw std::out_of_range("example id must be 1..7");
    return all[static_cast<std::size_t>(id - 1)];
}

Example scalar_unit_normalization() {
    Example e;
    e.id = 2;
    e.name = "scalar-averaging-unit";
    e.r = 1;
    e.m = 1;
    e.p = {sm(1, 1, {"1"}), sm(1, 1, {"1/2"})};
    e.x = sm(1, 1, {"1/2"});
    e.h = {sm(1, 1, {"s2/2"}), sm(1, 1, {"s2/2"})};
    e.chain = 1;
    e.circle_zeros_expected = {{-1.0, 2}};
    e.note = "unit-coefficient rescaling of the scalar entry";
    return e;
}

}  // namespace msf
