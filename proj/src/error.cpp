#include "dsg/error.hpp"

namespace dsg {

namespace {

std::string join_violations(const std::vector<std::string>& violations)
{
    std::string msg = "validation failed";
    for (const auto& v : violations) {
        msg += "\n  - ";
        msg += v;
    }
    return msg;
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations))
{
}

} // namespace dsg
