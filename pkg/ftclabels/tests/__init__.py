"""ftclabels tests"""
