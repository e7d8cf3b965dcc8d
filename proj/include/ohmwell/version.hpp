#ifndef OHMWELL_VERSION_HPP
#define OHMWELL_VERSION_HPP

namespace ohmwell {

inline constexpr const char* version_string = "0.1.0";

} // namespace ohmwell

#endif
