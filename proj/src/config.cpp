#include "qd/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qd {

static std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": missing '='");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw DomainError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(line.substr(eq + 1));  // later occurrences overwrite
    }
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DomainError("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw DomainError("complex literal: empty");

    double re = 0, im = 0;
    bool have_re = false, have_im = false;
    size_t pos = 0;
    while (pos < s.size()) {
        double sign = 1.0;
        if (s[pos] == '+' || s[pos] == '-') {
            if (s[pos] == '-') sign = -1.0;
            ++pos;
        }
        double mag;
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
            const char* begin = s.c_str() + pos;
            char* end = nullptr;
            mag = std::strtod(begin, &end);
            if (end == begin) throw DomainError("complex literal: bad number in '" + raw + "'");
            pos += static_cast<size_t>(end - begin);
        } else if (pos < s.size() && s[pos] == 'i') {
            mag = 1.0;  // bare "i" / "+i" / "-i"
        } else {
            throw DomainError("complex literal: unexpected '" + s.substr(pos) + "' in '" + raw +
                              "'");
        }
        if (pos < s.size() && s[pos] == 'i') {
            ++pos;
            if (have_im) throw DomainError("complex literal: two imaginary parts in '" + raw + "'");
            im = sign * mag;
            have_im = true;
        } else {
            if (have_re) throw DomainError("complex literal: two real parts in '" + raw + "'");
            re = sign * mag;
            have_re = true;
        }
    }
    (void)have_re;
    return {re, im};
}

} // namespace qd
