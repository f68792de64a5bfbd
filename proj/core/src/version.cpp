#include "spinepr/version.hpp"

namespace spinepr {

const char* version_string() { return "1.0.0"; }

}
