#ifndef RIGIDPTS_ERRORS_HPP
#define RIGIDPTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rigidpts
{

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RIGIDPTS_DECLARE_ERROR(name)                                                                                   \
    struct name : error {                                                                                              \
        using error::error;                                                                                            \
    }

RIGIDPTS_DECLARE_ERROR(negative_valuation);
RIGIDPTS_DECLARE_ERROR(insufficient_precision);
RIGIDPTS_DECLARE_ERROR(radius_violation);
RIGIDPTS_DECLARE_ERROR(out_of_disc);
RIGIDPTS_DECLARE_ERROR(no_witness);
RIGIDPTS_DECLARE_ERROR(zero_series);
RIGIDPTS_DECLARE_ERROR(monic_check_failed);
RIGIDPTS_DECLARE_ERROR(unsupported_presentation);
RIGIDPTS_DECLARE_ERROR(no_solution);
RIGIDPTS_DECLARE_ERROR(precision_ceiling);
RIGIDPTS_DECLARE_ERROR(invariant_violation);
RIGIDPTS_DECLARE_ERROR(parse_error);

#undef RIGIDPTS_DECLARE_ERROR

} // namespace rigidpts

#endif
