#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "weyl/errors.hpp"

namespace weyl {

using cplx = std::complex<double>;

// Serialized outputs record this; bump it if the enumeration ever changes.
inline const std::string kOrderingVersion = "graded-lex-1";

// Truncation to the first Hermite basis functions: the index box
// {0..N-1}^n enumerated by total degree, then lexicographically.
struct BasisTruncation {
    int n = 1;
    int N = 1;

    long size() const {
        long s = 1;
        for (int i = 0; i < n; ++i) s *= N;
        return s;
    }
};

bool valid(const BasisTruncation& t);

// The graded enumeration; element i is the multi-index of basis slot i.
std::vector<std::vector<int>> graded_indices(const BasisTruncation& t);

struct OperatorMatrix {
    BasisTruncation trunc;
    Eigen::MatrixXcd m;
};

} // namespace weyl
