#pragma once

namespace te::cli {

// Exit codes: 0 ok, 1 validation error, 2 numerical failure, 3 falsified
// regime assertion. Non-zero exits also write <out>/error.txt.
int run(int argc, char** argv);

}  // namespace te::cli
