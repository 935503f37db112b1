#pragma once
// Error taxonomy shared by all cantor modules.

#include <stdexcept>
#include <string>

namespace cantor {

enum class errc {
    invalid_spec,          // malformed generator description (cells, pattern, weights)
    horizon_exceeded,      // rational stand-in no longer emulates an irrational
    out_of_range,          // value outside [0,1) or index outside the admissible range
    inadmissible_digit,    // digit >= base at its position
    precision_unreachable, // digit source exhausted before the requested width
    length_mismatch,       // digit block and base block of different lengths
    not_extendable,        // substitution image of the start letter does not start with it
    not_primitive,         // no power of the substitution hits every letter
    not_growing,           // some letter's iterated image stays bounded
    source_exhausted,      // upstream digit stream ended early
    bad_params,            // construction parameters outside their stated ranges
    mismatched_radix,      // rebase pattern product differs from the source radix
    bad_density,           // target density does not integrate to 1 / cells do not tile
    empty_sample,          // statistic requested on an empty sample
    not_g_power,           // base is not a power of the declared g
    unsupported_model,     // cell geometry requested for a model without interval cylinders
    resource_limit,        // configured size cap exceeded
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_spec: return "InvalidSpec";
        case errc::horizon_exceeded: return "HorizonExceeded";
        case errc::out_of_range: return "OutOfRange";
        case errc::inadmissible_digit: return "InadmissibleDigit";
        case errc::precision_unreachable: return "PrecisionUnreachable";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::not_extendable: return "NotExtendable";
        case errc::not_primitive: return "NotPrimitive";
        case errc::not_growing: return "NotGrowing";
        case errc::source_exhausted: return "SourceExhausted";
        case errc::bad_params: return "BadParams";
        case errc::mismatched_radix: return "MismatchedRadix";
        case errc::bad_density: return "BadDensity";
        case errc::empty_sample: return "EmptySample";
        case errc::not_g_power: return "NotGPower";
        case errc::unsupported_model: return "UnsupportedModel";
        case errc::resource_limit: return "ResourceLimit";
    }
    return "Unknown";
}

} // namespace cantor
