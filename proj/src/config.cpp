// placeholder: module lands in a later commit
