#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace attnet {

/// Machine-checkable failure categories. Every exception thrown by the
/// library is an `Error` carrying one of these.
enum class Errc {
    MalformedRow,
    OutOfPeriod,
    LengthMismatch,
    UnknownRegionLabel,
    DimensionMismatch,
    NoOverlap,
    MissingReference,
    TargetSetMismatch,
    TooShort,
    PeriodMismatch,
    EmptyNetwork,
    UnknownNode,
    NoOutEdges,
    ZeroMean,
    InsufficientNodes,
    TooFewEdges,
    NonConvergence,
    IncompletePartition,
    DegenerateSeries,
    InsufficientLength,
    SingularDesign,
    AllLagsInfeasible,
    DirectionMismatch,
    InvalidDof,
    ZeroMarginal,
    EmptySample,
    ConstantInput,
    EmptyPhrase,
    NoCoverage,
    UnmappedCountry,
    InvalidSpec,
    InvalidArgument,
    Io,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// ISO-3166-1 alpha-2 code. Two uppercase ASCII letters; opaque otherwise.
class CountryCode {
public:
    CountryCode() = default;
    explicit CountryCode(std::string_view code);

    static bool valid(std::string_view code) noexcept;

    std::string str() const { return {chars_[0], chars_[1]}; }
    /// Dense index in [0, 676).
    int index() const noexcept { return (chars_[0] - 'A') * 26 + (chars_[1] - 'A'); }
    static CountryCode from_index(int idx);

    auto operator<=>(const CountryCode&) const = default;

private:
    std::array<char, 2> chars_{'A', 'A'};
};

using Date = std::chrono::sys_days;

/// Parses YYYY-MM-DD; throws Errc::MalformedRow on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// Inclusive calendar-day range.
struct Period {
    Date first;
    Date last;

    int days() const { return static_cast<int>((last - first).count()) + 1; }
    bool contains(Date d) const { return d >= first && d <= last; }
    bool operator==(const Period&) const = default;

    static Period collection_default();
};

inline int day_offset(Date from, Date to) { return static_cast<int>((to - from).count()); }

}  // namespace attnet

template <>
struct std::hash<attnet::CountryCode> {
    std::size_t operator()(const attnet::CountryCode& c) const noexcept {
        return static_cast<std::size_t>(c.index());
    }
};
