# -*- coding: utf-8 -*-

#  * Copyright (c) 2024-2026. Authors: see NOTICE file.
#  *
#  * Licensed under the Apache License, Version 2.0 (the "License");
#  * you may not use this file except in compliance with the License.
#  * You may obtain a copy of the License at
#  *
#  *      http://www.apache.org/licenses/LICENSE-2.0
#  *
#  * Unless required by applicable law or agreed to in writing, software
#  * distributed under the License is distributed on an "AS IS" BASIS,
#  * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  * See the License for the specific language governing permissions and
#  * limitations under the License.

# KEEP ENCODING - so that __version__ can be read even if py2.7 is used.



__title__ = 'unitac'
__description__ = 'Many-to-one accent conversion through discrete speech units'
__url__ = ''
__version__ = "0.1.0"
__format_version__ = 1
__license__ = 'Apache 2.0'
__copyright__ = 'Copyright 2024-2026 unitac developers'
__author__ = 'unitac developers'
__email__ = 'dev@unitac.invalid'
