// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace geocov {

/// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
int run_cli(int argc, char** argv);

}  // namespace geocov
