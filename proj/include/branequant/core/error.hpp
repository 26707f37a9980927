#pragma once

#include <stdexcept>
#include <string>

namespace bq {

enum class Errc {
    SingularForm,
    NotSkew,
    DegenerateDenominator,
    ChartMismatch,
    NotInStabilizer,
    IndexOutOfRange,
    QuadratureUnderflow,
    TruncationTooSmall,
    PointMismatch,
    DegreeOverflow,
    BandUnknown,
    NotClosed,
    NotExactOnDomain,
    MissingOverlap,
    UnknownExample,
    InvalidArgument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::SingularForm: return "SingularForm";
        case Errc::NotSkew: return "NotSkew";
        case Errc::DegenerateDenominator: return "DegenerateDenominator";
        case Errc::ChartMismatch: return "ChartMismatch";
        case Errc::NotInStabilizer: return "NotInStabilizer";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::QuadratureUnderflow: return "QuadratureUnderflow";
        case Errc::TruncationTooSmall: return "TruncationTooSmall";
        case Errc::PointMismatch: return "PointMismatch";
        case Errc::DegreeOverflow: return "DegreeOverflow";
        case Errc::BandUnknown: return "BandUnknown";
        case Errc::NotClosed: return "NotClosed";
        case Errc::NotExactOnDomain: return "NotExactOnDomain";
        case Errc::MissingOverlap: return "MissingOverlap";
        case Errc::UnknownExample: return "UnknownExample";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace bq
