#pragma once

#include <stdexcept>
#include <string>

namespace mapdes {

// Error conditions surfaced by the library. One exception type with a code
// keeps call sites and tests simple; the CLI maps codes to exit statuses.
enum class Errc {
    wrong_length,
    negative_value,
    malformed,
    non_positive_total,
    non_positive_capacity,
    invalid_price_order,
    negative_energy,
    duplicate_order,
    too_large,
    empty_profile,
    io_failure,
    format_version_mismatch,
    dimension_mismatch,
    missing_qtable,
    horizon_mismatch,
    zero_baseline,
    bad_config,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace mapdes
