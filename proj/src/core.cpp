#include "attnet/core.hpp"

#include <charconv>
#include <cstdio>

namespace attnet {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::MalformedRow: return "MalformedRow";
        case Errc::OutOfPeriod: return "OutOfPeriod";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::UnknownRegionLabel: return "UnknownRegionLabel";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NoOverlap: return "NoOverlap";
        case Errc::MissingReference: return "MissingReference";
        case Errc::TargetSetMismatch: return "TargetSetMismatch";
        case Errc::TooShort: return "TooShort";
        case Errc::PeriodMismatch: return "PeriodMismatch";
        case Errc::EmptyNetwork: return "EmptyNetwork";
        case Errc::UnknownNode: return "UnknownNode";
        case Errc::NoOutEdges: return "NoOutEdges";
        case Errc::ZeroMean: return "ZeroMean";
        case Errc::InsufficientNodes: return "InsufficientNodes";
        case Errc::TooFewEdges: return "TooFewEdges";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::IncompletePartition: return "IncompletePartition";
        case Errc::DegenerateSeries: return "DegenerateSeries";
        case Errc::InsufficientLength: return "InsufficientLength";
        case Errc::SingularDesign: return "SingularDesign";
        case Errc::AllLagsInfeasible: return "AllLagsInfeasible";
        case Errc::DirectionMismatch: return "DirectionMismatch";
        case Errc::InvalidDof: return "InvalidDof";
        case Errc::ZeroMarginal: return "ZeroMarginal";
        case Errc::EmptySample: return "EmptySample";
        case Errc::ConstantInput: return "ConstantInput";
        case Errc::EmptyPhrase: return "EmptyPhrase";
        case Errc::NoCoverage: return "NoCoverage";
        case Errc::UnmappedCountry: return "UnmappedCountry";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

bool CountryCode::valid(std::string_view code) noexcept {
    return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' && code[1] <= 'Z';
}

CountryCode::CountryCode(std::string_view code) {
    if (!valid(code)) {
        throw Error(Errc::MalformedRow, "invalid country code '" + std::string(code) + "'");
    }
    chars_ = {code[0], code[1]};
}

CountryCode CountryCode::from_index(int idx) {
    if (idx < 0 || idx >= 26 * 26) {
        throw Error(Errc::InvalidArgument, "country index out of range");
    }
    const char s[2] = {static_cast<char>('A' + idx / 26), static_cast<char>('A' + idx % 26)};
    return CountryCode(std::string_view(s, 2));
}

namespace {

int parse_fixed(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(Errc::MalformedRow, "bad date '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw Error(Errc::MalformedRow, "bad date '" + std::string(text) + "'");
    }
    const int y = parse_fixed(text.substr(0, 4), text);
    const int m = parse_fixed(text.substr(5, 2), text);
    const int d = parse_fixed(text.substr(8, 2), text);
    const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(m)),
                                          std::chrono::day(static_cast<unsigned>(d))};
    if (!ymd.ok()) {
        throw Error(Errc::MalformedRow, "bad date '" + std::string(text) + "'");
    }
    return Date(ymd);
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd(d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Period Period::collection_default() {
    using namespace std::chrono;
    return {Date(2016y / March / 7), Date(2017y / April / 14)};
}

}  // namespace attnet
