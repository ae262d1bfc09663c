#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "msf/diagnostics.hpp"
#include "msf/matpoly.hpp"
#include "msf/nme.hpp"
#include "msf/surd.hpp"

namespace msf {

struct JsonFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polynomial interchange format:
//   {"r": 2, "m": 1, "mirror": true, "coeffs": {"0": [...], "1": [...]}}
// Coefficient arrays are row-major with r*r entries. With mirror (the
// default when no negative keys appear) only k >= 0 is stored and
// P_{-k} = P_k^T is implied.
MatLaurentPoly laurent_from_json(const std::string& text);
MatLaurentPoly load_laurent(const std::string& path);
std::string laurent_to_json(const MatLaurentPoly& p, bool mirror = true);

// solver run summary; everything a regression baseline needs
struct RunReport {
    std::string label;
    std::string method;
    SolveStatus status = SolveStatus::MaxIterations;
    long iterations = 0;
    double final_eps_p = -1.0;
    double final_eps_h = -1.0;  // -1: no reference factor available
    bool has_rate = false;
    RateEstimate rate;
    std::vector<DenseMatrix> factors;  // H_0 .. H_m, empty on breakdown
    bool has_singularity = false;
    SingularityReport singularity;
};

std::string run_report_to_json(const RunReport& rep);
RunReport run_report_from_json(const std::string& text);

// trace CSV with header n,eps_P,eps_H,step_norm; %.17g fields,
// eps_H left empty when no reference was configured
void write_trace_csv(std::ostream& os, const IterationTrace& trace);
std::string trace_csv(const IterationTrace& trace);

// exact verification input: {"r": 2, "p0": [..], "p1": [..], "x": [..],
// "h0": [..], "h1": [..]} with surd expression strings, row-major
struct ExactInput {
    SurdMatrix p0, p1, x, h0, h1;
};
ExactInput exact_input_from_json(const std::string& text);

std::string read_text_file(const std::string& path);  // throws JsonFormatError

}  // namespace msf
