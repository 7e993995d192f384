#include "collabnet/countries.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace collabnet {
namespace {

// ISO 3166-1 alpha-2, plus AN CS DD SU YU (withdrawn, still present in
// older records) and XK (Kosovo, user-assigned but used by Scopus).
constexpr std::array<std::string_view, 255> kCodes = {
    "AD", "AE", "AF", "AG", "AI", "AL", "AM", "AN", "AO", "AQ", "AR", "AS", "AT", "AU", "AW",
    "AX", "AZ", "BA", "BB", "BD", "BE", "BF", "BG", "BH", "BI", "BJ", "BL", "BM", "BN", "BO",
    "BQ", "BR", "BS", "BT", "BV", "BW", "BY", "BZ", "CA", "CC", "CD", "CF", "CG", "CH", "CI",
    "CK", "CL", "CM", "CN", "CO", "CR", "CS", "CU", "CV", "CW", "CX", "CY", "CZ", "DD", "DE",
    "DJ", "DK", "DM", "DO", "DZ", "EC", "EE", "EG", "EH", "ER", "ES", "ET", "FI", "FJ", "FK",
    "FM", "FO", "FR", "GA", "GB", "GD", "GE", "GF", "GG", "GH", "GI", "GL", "GM", "GN", "GP",
    "GQ", "GR", "GS", "GT", "GU", "GW", "GY", "HK", "HM", "HN", "HR", "HT", "HU", "ID", "IE",
    "IL", "IM", "IN", "IO", "IQ", "IR", "IS", "IT", "JE", "JM", "JO", "JP", "KE", "KG", "KH",
    "KI", "KM", "KN", "KP", "KR", "KW", "KY", "KZ", "LA", "LB", "LC", "LI", "LK", "LR", "LS",
    "LT", "LU", "LV", "LY", "MA", "MC", "MD", "ME", "MF", "MG", "MH", "MK", "ML", "MM", "MN",
    "MO", "MP", "MQ", "MR", "MS", "MT", "MU", "MV", "MW", "MX", "MY", "MZ", "NA", "NC", "NE",
    "NF", "NG", "NI", "NL", "NO", "NP", "NR", "NU", "NZ", "OM", "PA", "PE", "PF", "PG", "PH",
    "PK", "PL", "PM", "PN", "PR", "PS", "PT", "PW", "PY", "QA", "RE", "RO", "RS", "RU", "RW",
    "SA", "SB", "SC", "SD", "SE", "SG", "SH", "SI", "SJ", "SK", "SL", "SM", "SN", "SO", "SR",
    "SS", "ST", "SU", "SV", "SX", "SY", "SZ", "TC", "TD", "TF", "TG", "TH", "TJ", "TK", "TL",
    "TM", "TN", "TO", "TR", "TT", "TV", "TW", "TZ", "UA", "UG", "UM", "US", "UY", "UZ", "VA",
    "VC", "VE", "VG", "VI", "VN", "VU", "WF", "WS", "XK", "YE", "YT", "YU", "ZA", "ZM", "ZW",
};

static_assert(std::is_sorted(kCodes.begin(), kCodes.end()));

struct Alias {
    std::string_view from;
    std::string_view to;
};

constexpr std::array<Alias, 6> kAliases = {{
    {"BU", "MM"},
    {"EL", "GR"},
    {"FX", "FR"},
    {"TP", "TL"},
    {"UK", "GB"},
    {"ZR", "CD"},
}};

}  // namespace

std::span<const std::string_view> country_universe() { return kCodes; }

std::optional<std::string> normalize_country(std::string_view code) {
    std::string up;
    for (unsigned char c : code) {
        if (std::isspace(c)) continue;
        up += static_cast<char>(std::toupper(c));
    }
    for (const auto& a : kAliases) {
        if (up == a.from) {
            up = a.to;
            break;
        }
    }
    if (!std::binary_search(kCodes.begin(), kCodes.end(), std::string_view(up))) return std::nullopt;
    return up;
}

}  // namespace collabnet
