#pragma once

namespace spinepr {

const char* version_string();   // semantic version of the library

}
