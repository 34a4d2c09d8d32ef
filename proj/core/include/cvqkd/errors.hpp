#pragma once

#include <stdexcept>

namespace cvqkd {

/// The effective transmittance reached 1, so the asymptotic expressions
/// contain a divergent 1/(1 - eta') factor and no finite answer exists.
class singular_channel_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The repeaterless capacity of a channel with eta >= 1 is unbounded.
class infinite_capacity_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Bracket growth never found a sign change of the key rate in the noise.
class no_threshold_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sample statistics too degenerate to invert (zero variance and the like).
class estimation_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace cvqkd
