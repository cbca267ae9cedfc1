#pragma once
#include <map>
#include <optional>
#include <string>

#include "qd/common.hpp"

namespace qd {

// Flat key=value config files; '#' comments; later keys win. Flags override files.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Complex literals like "2i", "1.6+2i", "-1-0.5i", "3", "i", with optional spaces.
cplx parse_complex(const std::string& s);

} // namespace qd
