#pragma once

#include <stdexcept>
#include <string>

namespace ffnet {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FFNET_DEFINE_ERROR(name)        \
  class name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// dataset
FFNET_DEFINE_ERROR(MissingColumn);
FFNET_DEFINE_ERROR(NonMonotonicDates);
FFNET_DEFINE_ERROR(NonFiniteValue);
FFNET_DEFINE_ERROR(EmptyRegime);
FFNET_DEFINE_ERROR(BadFractions);
FFNET_DEFINE_ERROR(FrameTooSmall);

// scaling
FFNET_DEFINE_ERROR(EmptyFrame);
FFNET_DEFINE_ERROR(ColumnMismatch);
FFNET_DEFINE_ERROR(DegenerateColumn);

// network / trainer
FFNET_DEFINE_ERROR(ShapeMismatch);
FFNET_DEFINE_ERROR(NonDifferentiableActivation);
FFNET_DEFINE_ERROR(DivergedLoss);
FFNET_DEFINE_ERROR(EmptyBatch);

// metrics
FFNET_DEFINE_ERROR(LengthMismatch);
FFNET_DEFINE_ERROR(EmptyInput);
FFNET_DEFINE_ERROR(ZeroActual);

// cli / io
FFNET_DEFINE_ERROR(ParseError);
FFNET_DEFINE_ERROR(ConfigError);
FFNET_DEFINE_ERROR(IoError);

#undef FFNET_DEFINE_ERROR

}  // namespace ffnet
