#pragma once

#include "tfa/errors.hpp"
#include "tfa/numeric.hpp"
#include "tfa/exponent.hpp"
#include "tfa/basis.hpp"
#include "tfa/weight.hpp"
#include "tfa/grid.hpp"
#include "tfa/mixed_norm.hpp"
#include "tfa/trigpoly.hpp"
#include "tfa/window.hpp"
#include "tfa/stft.hpp"
#include "tfa/wiener.hpp"
#include "tfa/corpus.hpp"
#include "tfa/modulation.hpp"
#include "tfa/gabor.hpp"
#include "tfa/convolution.hpp"
#include "tfa/periodic.hpp"
#include "tfa/study.hpp"
