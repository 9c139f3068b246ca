#pragma once

#include <stdexcept>
#include <string>

namespace retrade {

// Base class for all library errors. Subcommands map these onto exit codes,
// so keep the hierarchy flat and the names aligned with what went wrong.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- market-core ---
struct EmptyPopulationError : Error {
    EmptyPopulationError() : Error("EmptyPopulation: no values and no costs") {}
};
struct EmptyLogError : Error {
    EmptyLogError() : Error("EmptyLog: transaction log has no entries") {}
};

// --- auction-sim ---
struct ConfigError : Error {
    using Error::Error;
};
struct NoTradersError : Error {
    NoTradersError() : Error("NoTraders: population empty on at least one side") {}
};

// --- speculative-sim ---
struct DistributionError : Error {
    using Error::Error;
};
struct NonStationaryError : Error {
    using Error::Error;
};
struct NoRootError : Error {
    using Error::Error;
};
struct DegeneratePriceError : Error {
    using Error::Error;
};

// --- tail-stats ---
struct NonPositivePriceError : Error {
    using Error::Error;
};
struct TooShortError : Error {
    using Error::Error;
};
struct EmptySeriesError : Error {
    EmptySeriesError() : Error("Empty: series has no observations") {}
};
struct TailTooSmallError : Error {
    using Error::Error;
};
struct ZeroMagnitudesError : Error {
    using Error::Error;
};
struct NoValidTailError : Error {
    using Error::Error;
};
struct ZeroVarianceError : Error {
    using Error::Error;
};

// --- no-arbitrage ---
struct SpecError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct UtilityDomainError : Error {
    using Error::Error;
};

// --- cli-io ---
struct ParseError : Error {
    ParseError(const std::string& what, long line)
        : Error("ParseError at line " + std::to_string(line) + ": " + what), line(line) {}
    long line;
};
struct SchemaError : Error {
    SchemaError(const std::string& what, long line)
        : Error("SchemaError at line " + std::to_string(line) + ": " + what), line(line) {}
    explicit SchemaError(const std::string& what) : Error("SchemaError: " + what), line(-1) {}
    long line;
};

}  // namespace retrade
