#pragma once

#include <stdexcept>
#include <string>

namespace entlight {

// Base type for every error thrown by this library, so callers can catch
// either the broad category or a specific condition.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter set violates a model invariant (non-positive energy, bad grid...).
class invalid_params : public error {
public:
    using error::error;
};

// Polariton branch index outside {1, 2}.
class invalid_branch : public error {
public:
    using error::error;
};

// The momentum-conservation equation has no transverse solution.
class no_phase_matching : public error {
public:
    using error::error;
};

// Both branch-mixing potentials vanish at this point; the pair amplitudes
// are undefined (0/0).
class degenerate_material : public error {
public:
    using error::error;
};

// More pair channels requested than the dense representation supports.
class capacity_exceeded : public error {
public:
    using error::error;
};

// Observation window with t2 < t1.
class invalid_window : public error {
public:
    using error::error;
};

// A matrix expected to be Hermitian is not, beyond tolerance.
class non_hermitian : public error {
public:
    using error::error;
};

// A density matrix has no eigenvalue above the rank threshold.
class null_state : public error {
public:
    using error::error;
};

// Configuration document is missing fields, has unknown keys, or fails
// validation; the message names the offending field.
class config_error : public error {
public:
    using error::error;
};

// Output could not be written.
class io_error : public error {
public:
    using error::error;
};

} // namespace entlight
