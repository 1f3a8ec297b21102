// placeholder, filled in later
