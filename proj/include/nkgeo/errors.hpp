#pragma once

#include <stdexcept>

namespace nkgeo {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotUnit : Error { using Error::Error; };
struct NonOrthonormalFrame : Error { using Error::Error; };
struct LeftHandedFrame : Error { using Error::Error; };
struct NotTangent : Error { using Error::Error; };
struct BaseMismatch : Error { using Error::Error; };
struct NonPositiveStep : Error { using Error::Error; };
struct EmptyTrace : Error { using Error::Error; };
struct ZeroC1 : Error { using Error::Error; };
struct ZeroSpeedCurve : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace nkgeo
