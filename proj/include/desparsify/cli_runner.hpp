#pragma once

namespace dsp {

// Full command-line surface; returns the process exit code.
// 0: success and every requested verification passed
// 1: runtime failure or a failed verification
// 2: usage error
int run_cli(int argc, char** argv);

}  // namespace dsp
