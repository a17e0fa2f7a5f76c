#pragma once

#include <string_view>

// Progress and warnings go to standard error; data never does.
namespace aenmf::log {

void set_quiet(bool quiet);
bool quiet();
void info(std::string_view msg);
void warn(std::string_view msg);

}  // namespace aenmf::log
