"""
qcodesign command-line interface
"""
