#pragma once

#include <string_view>

// The ten-patient diagnosis-code example used by `coat selftest`; mirrors
// data/clinic/.
namespace coat::cli::builtin {

inline constexpr std::string_view kDataset =
    "a b c d e f g h\n"
    "a c e f g\n"
    "c d e f h\n"
    "a c e f\n"
    "e f g h\n"
    "d e f g\n"
    "a b d e\n"
    "a c f\n"
    "a c\n"
    "b h\n";

inline constexpr std::string_view kPrivacy =
    "a b c\n"
    "d e f g h\n";

inline constexpr std::string_view kUtility =
    "a b\n"
    "c\n"
    "d\n"
    "e f g h\n";

inline constexpr std::string_view kTaxonomy =
    "root\n"
    "  (a,b,c)\n"
    "    a\n"
    "    b\n"
    "    c\n"
    "  (d,e,f,g,h)\n"
    "    d\n"
    "    e\n"
    "    f\n"
    "    g\n"
    "    h\n";

inline constexpr std::string_view kExpectedAnonymized =
    "(a,b) c e f (g,h)\n"
    "(a,b) c e f (g,h)\n"
    "c e f (g,h)\n"
    "(a,b) c e f\n"
    "e f (g,h)\n"
    "e f (g,h)\n"
    "(a,b) e\n"
    "(a,b) c f\n"
    "(a,b) c\n"
    "(a,b) (g,h)\n";

inline constexpr std::string_view kExpectedTrace =
    "MERGE b a -> (a,b)\n"
    "SUPPRESS d\n"
    "MERGE g h -> (g,h)\n";

inline constexpr unsigned kK = 5;
inline constexpr double kS = 15.0;

// Weight of (a,b) under the taxonomy and its UL when the support of 7 is
// divided by 8 rather than by N = 10.
inline constexpr double kExpectedWeightAB = 0.375;
inline constexpr double kExpectedUlAB = 0.004;
inline constexpr double kUlTolerance = 5e-4;

}  // namespace coat::cli::builtin
