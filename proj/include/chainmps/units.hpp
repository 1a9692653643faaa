// units.hpp — Internal unit conventions and conversions
//
// Internally everything is meV for energies and ps for times, with hbar
// carried explicitly so that phases are omega * t / hbar.

#pragma once

#include <string>
#include <string_view>

#include "chainmps/errors.hpp"

namespace chainmps::units {

inline constexpr double hbar_meV_ps = 0.6582119569;   // meV * ps
inline constexpr double wavenumber_per_meV = 8.065544; // cm^-1 per meV

enum class Unit { meV, InvCm, InvPs, fs, ps };

enum class Dimension { Energy, Time };

inline Dimension dimension_of(Unit u) {
    switch (u) {
        case Unit::meV:
        case Unit::InvCm:
        case Unit::InvPs: return Dimension::Energy;
        case Unit::fs:
        case Unit::ps: return Dimension::Time;
    }
    throw InvalidParameter("unknown unit");
}

inline Unit parse_unit(std::string_view s) {
    if (s == "meV") return Unit::meV;
    if (s == "cm^-1" || s == "1/cm") return Unit::InvCm;
    if (s == "ps^-1" || s == "1/ps") return Unit::InvPs;
    if (s == "fs") return Unit::fs;
    if (s == "ps") return Unit::ps;
    throw InvalidParameter("unknown unit '" + std::string(s) + "'");
}

inline std::string unit_name(Unit u) {
    switch (u) {
        case Unit::meV: return "meV";
        case Unit::InvCm: return "cm^-1";
        case Unit::InvPs: return "ps^-1";
        case Unit::fs: return "fs";
        case Unit::ps: return "ps";
    }
    return "?";
}

// meV is the pivot for energies, ps for times. ps^-1 is angular
// frequency: E = hbar * omega.
inline double to_base(double value, Unit u) {
    switch (u) {
        case Unit::meV: return value;
        case Unit::InvCm: return value / wavenumber_per_meV;
        case Unit::InvPs: return value * hbar_meV_ps;
        case Unit::ps: return value;
        case Unit::fs: return value * 1e-3;
    }
    throw InvalidParameter("unknown unit");
}

inline double from_base(double value, Unit u) {
    switch (u) {
        case Unit::meV: return value;
        case Unit::InvCm: return value * wavenumber_per_meV;
        case Unit::InvPs: return value / hbar_meV_ps;
        case Unit::ps: return value;
        case Unit::fs: return value * 1e3;
    }
    throw InvalidParameter("unknown unit");
}

inline double convert(double value, Unit from, Unit to) {
    if (dimension_of(from) != dimension_of(to))
        throw InvalidParameter("cannot convert " + unit_name(from) + " to " +
                               unit_name(to));
    return from_base(to_base(value, from), to);
}

inline double convert(double value, std::string_view from, std::string_view to) {
    return convert(value, parse_unit(from), parse_unit(to));
}

} // namespace chainmps::units
