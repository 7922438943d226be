#pragma once

#include <string>

#include "fsv/data/panel.hpp"

namespace fsv::io {

// Reads the standard input CSV: header row `date,<name1>,...`, ISO-8601 date
// strings, strictly positive numeric prices, comma-separated, period decimal.
// Throws InvalidInput naming the offending row/column on malformed content.
PricePanel read_price_csv(const std::string& path);

void write_price_csv(const PricePanel& panel, const std::string& path);

}  // namespace fsv::io
