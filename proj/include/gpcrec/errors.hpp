#ifndef GPCREC_ERRORS_HPP
#define GPCREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gpcrec {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegreeTooLarge : public Error { public: using Error::Error; };
class OrderTooLarge : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class MissingExplicitEntry : public Error { public: using Error::Error; };
class NonConvergent : public Error { public: using Error::Error; };
class SetTooLarge : public Error { public: using Error::Error; };
class TabulationFailure : public Error { public: using Error::Error; };
class IllConditionedInput : public Error { public: using Error::Error; };
class TargetTooSmall : public Error { public: using Error::Error; };
class RankDeficient : public Error { public: using Error::Error; };
class ShapeMismatch : public Error { public: using Error::Error; };
class EllipticityViolation : public Error { public: using Error::Error; };
class SingularSystem : public Error { public: using Error::Error; };
class DegenerateInput : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

} // namespace gpcrec

#endif
