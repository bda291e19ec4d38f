#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdcp/matrix.hpp"

namespace pdcp {

// Rectangular numeric CSV, one observation per row. A first row that fails
// to parse as numbers is treated as a header and skipped. Errors name the
// offending 1-based line.
ObservationMatrix load_matrix_csv(const std::filesystem::path& path);
ObservationMatrix parse_matrix_csv(std::istream& in, const std::string& name);

// Shortest round-trippable decimal representation per cell, so that
// load(write(M)) == M bit for bit.
void write_matrix_csv(const ObservationMatrix& m, std::ostream& os);
void write_matrix_csv(const ObservationMatrix& m, const std::filesystem::path& path);

// Weekly closing prices, rows = weeks in time order, columns = assets.
// Missing cells (empty or "NA") are held as NaN until cleaning.
struct PriceTable {
    std::vector<std::string> assets;
    std::size_t weeks = 0;
    std::vector<double> prices;  // weeks x assets, row-major, NaN = missing

    double at(std::size_t t, std::size_t j) const { return prices[t * assets.size() + j]; }

    static PriceTable load_csv(const std::filesystem::path& path);
    static PriceTable parse_csv(std::istream& in, const std::string& name);
};

struct ReturnsResult {
    ObservationMatrix returns;  // rows = weeks 1..T, columns = retained assets
    std::vector<std::string> kept_assets;
    std::vector<std::string> dropped_assets;
};

// Week-to-week returns R_t = P_t / P_{t-1} - 1 per asset. With
// drop_incomplete, assets with any missing price are excluded; otherwise a
// missing price is an error. Prices must be strictly positive.
ReturnsResult prices_to_returns(const PriceTable& prices, bool drop_incomplete);

}  // namespace pdcp
