#pragma once

#include <stdexcept>
#include <string>

namespace mazgrid {

enum class Errc {
    ResolutionTooCoarse,
    BadParams,
    InvalidCell,
    NotRefinable,
    Disconnected,
    RadiusTooSmall,
    EmptySet,
    BadExponent,
    InfeasibleTarget,
    NoBoundary,
    KEmpty,
    BoxNotInterior,
    CertificateMissing,
    NotNested,
    UnstableAmbient,
    BrokenPath,
    UnknownExample,
    AssertionFailed,
    BadInput,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case Errc::BadParams: return "BadParams";
        case Errc::InvalidCell: return "InvalidCell";
        case Errc::NotRefinable: return "NotRefinable";
        case Errc::Disconnected: return "Disconnected";
        case Errc::RadiusTooSmall: return "RadiusTooSmall";
        case Errc::EmptySet: return "EmptySet";
        case Errc::BadExponent: return "BadExponent";
        case Errc::InfeasibleTarget: return "InfeasibleTarget";
        case Errc::NoBoundary: return "NoBoundary";
        case Errc::KEmpty: return "KEmpty";
        case Errc::BoxNotInterior: return "BoxNotInterior";
        case Errc::CertificateMissing: return "CertificateMissing";
        case Errc::NotNested: return "NotNested";
        case Errc::UnstableAmbient: return "UnstableAmbient";
        case Errc::BrokenPath: return "BrokenPath";
        case Errc::UnknownExample: return "UnknownExample";
        case Errc::AssertionFailed: return "AssertionFailed";
        case Errc::BadInput: return "BadInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace mazgrid
