#pragma once

#include <stdexcept>
#include <string>

namespace msqrt {

enum class errc {
    dimension_mismatch,
    zero_divisor,
    nonfinite_value,
    not_z_matrix,
    u_not_positive,
    v_negative,
    no_triplet,
    invalid_triplet,
    gth_structural_zero_pivot,
    gth_singular,
    lu_singular,
    zero_matrix,
    bad_option,
    shift_requires_singular,
    shift_requires_irreducible,
    shift_no_column,
    step_mismatch,
    sign_violation,
    parse_error,
    io_error,
    no_convergence,
};

// Short stable identifiers, used in CLI "ERROR <code> <message>" lines.
const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace msqrt
