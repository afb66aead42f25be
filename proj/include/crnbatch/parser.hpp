#ifndef CRNBATCH_PARSER_HPP
#define CRNBATCH_PARSER_HPP

#include <string>
#include <string_view>

#include "crnbatch/crn.hpp"

namespace crnbatch {

// Reserved names for the catalyst and waste species added by uniformization.
inline constexpr std::string_view kCatalystName = "__K";
inline constexpr std::string_view kWasteName = "__W";

// One reaction per line:  side -> side : rate   or   side <-> side : fwd, rev
// Optional `species: A, B` lines pin the species table order.
Crn parse_crn(std::string_view text);

// "A=100, B=50"; unlisted species are zero.
Configuration parse_config(std::string_view text, const Crn& crn);

std::string serialize_crn(const Crn& crn);
std::string serialize_reaction(const Crn& crn, const Reaction& a);
std::string serialize_config(const Configuration& c, const Crn& crn);
std::string format_double(double x);

}  // namespace crnbatch

#endif  // CRNBATCH_PARSER_HPP
