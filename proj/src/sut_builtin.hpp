// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <memory>

#include "provtrail/sut.hpp"

namespace provtrail {

std::unique_ptr<Sut> make_avl_sut();
std::unique_ptr<Sut> make_fs_sut();

}  // namespace provtrail
