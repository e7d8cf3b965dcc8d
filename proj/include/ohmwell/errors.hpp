#ifndef OHMWELL_ERRORS_HPP
#define OHMWELL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ohmwell {

// Bad user input: malformed config files, out-of-range parameters, CLI misuse.
// The CLI maps this family to exit code 1.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical precondition failed at runtime: coercivity violations,
// mismatched shapes, queries outside tabulated ranges, non-finite states,
// growth certificates that turned out to be false.  The CLI maps this
// family to exit code 2, same as a failed diagnostic report.
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ohmwell

#endif
